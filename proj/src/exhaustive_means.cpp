#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>

#include <fmt/format.h>

#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/quadrature.hpp"
#include "spread_detail.hpp"

namespace polling {

namespace {

constexpr int kPanelOrder = 4;

void check_grid(const SystemParameters& p, const FkSolution& s) {
    if (s.grid.fingerprint() != p.fingerprint())
        throw Error(ErrorKind::GridMismatch, "grid was solved for different parameters");
}

// expm1(rho x) / rho, continuous at rho = 0.
double em1(double rho, double x) {
    return rho > 0.0 ? std::expm1(rho * x) / rho : x;
}

std::span<const double> breaks_of(const LocationDensity& loc) {
    const auto& b = loc.breakpoints();
    return {b.data(), b.size()};
}

// Linear interpolation of row i of h at offset t in [0, 1].
double h_row(const GridFunction& g, int i, double t) {
    const int n = g.n();
    const double phi = t * n;
    int k = static_cast<int>(phi);
    if (k >= n) k = n - 1;
    const double b = phi - k;
    return (1.0 - b) * g.h_node(i, k) + b * g.h_node(i, k + 1);
}

// Integral over the torus of pi(y) pi(u) h(y, u) kern(y, u, t), u = fold(y + t): outer variable y
// by panels over grid cells, inner offset t by panels over grid columns; both split where the
// density or the depot introduces a kink.
template <class K>
double torus_integral(const LocationDensity& loc, const GridFunction& grid, K&& kern) {
    const int n = grid.n();
    const GaussRule& gr = gauss_rule(kPanelOrder);
    const double len = 1.0 / n;
    std::vector<double> bp;
    for (std::size_t k = 0; k + 1 < loc.breakpoints().size(); ++k) bp.push_back(loc.breakpoints()[k]);

    std::vector<double> cuts;
    auto inner = [&](double y) {
        cuts.clear();
        for (double b : bp) {
            double t = b - y;
            t -= std::floor(t);
            if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
        for (int k = 1; k < n; ++k) cuts.push_back(static_cast<double>(k) / n);
        cuts.push_back(1.0);
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0, lo = 0.0;
        for (double hi : cuts) {
            if (hi <= lo) continue;
            const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            double s = 0.0;
            for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
                const double t = mid + half * gr.nodes[q];
                const double u = fold(y + t);
                s += gr.weights[q] * loc.pdf(u) * grid.h(y, u) * kern(y, u, t);
            }
            total += s * half;
            lo = hi;
        }
        return total;
    };

    double total = 0.0;
    std::vector<double> ocuts;
    for (int i = 0; i < n; ++i) {
        const double a = grid.node(i);
        ocuts.clear();
        for (double b : bp) {
            double s = b - a;
            s -= std::floor(s);
            if (s > 0.0 && s < len) ocuts.push_back(s);
        }
        ocuts.push_back(len);
        std::sort(ocuts.begin(), ocuts.end());
        double lo = 0.0;
        for (double hi : ocuts) {
            if (hi <= lo) continue;
            const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            double s = 0.0;
            for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
                const double y = fold(a + mid + half * gr.nodes[q]);
                s += gr.weights[q] * loc.pdf(y) * inner(y);
            }
            total += s * half;
            lo = hi;
        }
    }
    return total;
}

// hk(a) = int_a^1 K'(w) exp(rho (w - a)) dw on a uniform table with cubic Hermite lookup.
class TailTable {
public:
    TailTable(const BatchSize& k, double rho, int m = 4096) : k_(k), rho_(rho), m_(m), v_(m + 1) {
        const GaussRule& gr = gauss_rule(8);
        v_[m] = 0.0;
        const double step = 1.0 / m;
        for (int i = m - 1; i >= 0; --i) {
            const double a = static_cast<double>(i) / m;
            double s = 0.0;
            for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
                const double w = a + 0.5 * step * (1.0 + gr.nodes[q]);
                s += gr.weights[q] * k.pgf_d1(w) * std::exp(rho * (w - a));
            }
            v_[i] = std::exp(rho * step) * v_[i + 1] + 0.5 * step * s;
        }
    }

    double operator()(double a) const {
        a = std::clamp(a, 0.0, 1.0);
        double pos = a * m_;
        int i = static_cast<int>(pos);
        if (i >= m_) i = m_ - 1;
        const double t = pos - i;
        const double h = 1.0 / m_;
        const double a0 = static_cast<double>(i) / m_, a1 = static_cast<double>(i + 1) / m_;
        const double y0 = v_[i], y1 = v_[i + 1];
        const double d0 = -k_.pgf_d1(a0) - rho_ * y0, d1 = -k_.pgf_d1(a1) - rho_ * y1;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * h * d1;
    }

private:
    const BatchSize& k_;
    double rho_;
    int m_;
    std::vector<double> v_;
};

}  // namespace

double pgf_double_integral(const SystemParameters& p) {
    const LocationDensity& loc = p.location();
    const BatchSize& k = p.batch();
    if (loc.is_uniform()) return k.mean_inv_k1();
    auto outer = [&](double u) {
        auto f = [&](double s) { return k.pgf(loc.arc(u, fold(u + s))); };
        const std::vector<double> br = detail::arc_breaks(loc, u, 1.0);
        return integrate_pieces(f, std::span<const double>(br), 0.0, 1.0, 1e-11, 1e-15);
    };
    return integrate_pieces(outer, breaks_of(loc), 0.0, 1.0, 1e-10, 1e-14);
}

double fk_value(const SystemParameters& p, const FkSolution& s, double x, double y) {
    check_grid(p, s);
    const LocationDensity& loc = p.location();
    return loc.pdf(x) * loc.pdf(y) * s.grid.h(x, y) / p.server_density(y);
}

double spread(const SystemParameters& p, const FkSolution& s, double x, double y) {
    return partial_spread(p, x, y).total() + fk_value(p, s, x, y);
}

BoundedValue exhaustive_mean_sojourn(const SystemParameters& p, const FkSolution& s) {
    check_grid(p, s);
    const LocationDensity& loc = p.location();
    const BatchSize& k = p.batch();
    const double rho = p.rho(), alpha = p.alpha();
    const double eb = p.service().mean(), eb2 = p.service().second_moment();

    double v = eb + alpha / (1.0 - rho);
    v -= alpha * (2.0 * rho - rho * rho) / (1.0 - rho) * k.mean_inv_k1() +
         (1.0 - rho) * alpha * pgf_double_integral(p);
    v += rho * (1.0 + rho) * eb2 / (2.0 * (1.0 - rho) * eb);
    v -= rho * rho * eb2 / (eb * (1.0 - rho)) * k.mean_inv_k1();
    if (k.kmax() >= 2)
        v += eb * integrate([&](double w) { return k.pgf_d2(w) * em1(rho, w); }, 0.0, 1.0, 1e-12, 1e-16);

    if (k.kmax() >= 2) {
        const TailTable hk(k, rho);
        v += eb * torus_integral(loc, s.grid, [&](double y, double u, double) {
                 return hk(1.0 - loc.arc(y, u));
             });
    }
    return {v, s.report.error_bound_esb};
}

BoundedValue exhaustive_mean_delivery(const SystemParameters& p, const FkSolution& s) {
    check_grid(p, s);
    const LocationDensity& loc = p.location();
    const BatchSize& k = p.batch();
    const double rho = p.rho(), alpha = p.alpha();
    const double eb = p.service().mean(), eb2 = p.service().second_moment(), ek = k.mean();
    const auto br = breaks_of(loc);
    auto w = [&](double u) { return rho * loc.pdf(u) + 1.0 - rho; };
    auto A = [&](double u) { return 1.0 - loc.cdf(u); };

    const double d1 = eb * em1(rho, 1.0) *
                      integrate_pieces([&](double u) { return w(u) * k.pgf_d1(A(u)); }, br, 0.0, 1.0,
                                       1e-11, 1e-15);
    const double d2 = eb * integrate_pieces(
                               [&](double u) {
                                   const double a = A(u);
                                   return w(u) * (ek - k.pgf_d1(a)) *
                                          (em1(rho, a + 1.0) - a * std::exp(rho * a));
                               },
                               br, 0.0, 1.0, 1e-11, 1e-15);
    const double d3 = alpha / (2.0 * (1.0 - rho)) +
                      alpha / (1.0 - rho) *
                          integrate_pieces([&](double u) { return w(u) * k.pgf_complement(loc.cdf(u)); },
                                           br, 0.0, 1.0, 1e-11, 1e-15);
    const double d4 = rho * eb2 / (2.0 * eb) + rho * rho * eb2 / (2.0 * (1.0 - rho) * eb) +
                      rho * eb2 / ((1.0 - rho) * eb) * k.mean_k_over_k1();
    const double d5 = -rho * eb2 / eb *
                      integrate([&](double x) { return std::exp(rho * x) * k.pgf_complement(1.0 - x); },
                                0.0, 1.0, 1e-12, 1e-16);
    double v = d1 + d2 + d3 + d4 + d5;

    if (k.kmax() >= 2) {
        v += torus_integral(loc, s.grid, [&](double z, double u, double t) {
            const double az = A(z);
            const double e = std::exp(rho * az);
            const double miss = k.pgf_complement(loc.cdf(u));
            if (z + t >= 1.0) return eb * ((1.0 - miss) * e + miss * (std::exp(rho * az + rho) - rho * az * e));
            return eb * miss * e;
        });
    }
    return {v, s.report.error_bound_ed};
}

double spread_mass_closed_form(const SystemParameters& p) {
    const double lek = p.lambda() * p.batch().mean();
    return lek / (2.0 * (1.0 - p.rho())) *
           (p.alpha() + lek * p.service().second_moment() +
            p.service().mean() * p.batch().factorial2() / p.batch().mean());
}

BoundedValue spread_mass(const SystemParameters& p, const FkSolution& s) {
    check_grid(p, s);
    const LocationDensity& loc = p.location();
    const double rho = p.rho();
    auto outer = [&](double x) {
        auto f = [&](double t) {
            const double u = fold(x + t);
            return p.server_density(u) * partial_spread(p, x, u).total();
        };
        const std::vector<double> br = detail::arc_breaks(loc, x, 1.0);
        return integrate_pieces(f, std::span<const double>(br), 0.0, 1.0, 1e-11, 1e-15);
    };
    double v = integrate_pieces(outer, breaks_of(loc), 0.0, 1.0, 1e-10, 1e-14);
    if (p.batch().kmax() >= 2 && rho > 0.0)
        v += torus_integral(loc, s.grid, [](double, double, double) { return 1.0; });
    return {v, s.report.zeta};
}

ResidualReport spread_residual(const SystemParameters& p, const FkSolution& s) {
    check_grid(p, s);
    const LocationDensity& loc = p.location();
    const GridFunction& grid = s.grid;
    const int n = grid.n();
    const std::size_t n1 = static_cast<std::size_t>(n) + 1;
    const double rho = p.rho();
    const double lek = p.lambda() * p.batch().mean();
    const double eb = p.service().mean(), eb2 = p.service().second_moment();
    const double kappa = p.batch().factorial2() / p.batch().mean();
    const GaussRule& gr = gauss_rule(kPanelOrder);

    // cum[i][k] = int_0^{k/n} pi(x_i + t) h(x_i, x_i + t) dt
    std::vector<double> cum(static_cast<std::size_t>(n) * n1, 0.0);
    std::vector<double> bp;
    for (std::size_t k = 0; k + 1 < loc.breakpoints().size(); ++k) bp.push_back(loc.breakpoints()[k]);
    for (int i = 0; i < n; ++i) {
        const double xi = grid.node(i);
        for (int k = 0; k < n; ++k) {
            const double a = static_cast<double>(k) / n, b = static_cast<double>(k + 1) / n;
            std::vector<double> cuts{b};
            for (double q : bp) {
                double t = q - xi;
                t -= std::floor(t);
                if (t > a && t < b) cuts.push_back(t);
            }
            std::sort(cuts.begin(), cuts.end());
            double lo = a, acc = 0.0;
            for (double hi : cuts) {
                const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
                double sum = 0.0;
                for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
                    const double t = mid + half * gr.nodes[q];
                    sum += gr.weights[q] * loc.pdf(xi + t) * h_row(grid, i, t);
                }
                acc += sum * half;
                lo = hi;
            }
            cum[i * n1 + k + 1] = cum[i * n1 + k] + acc;
        }
    }

    ResidualReport rep;
    const double zeta = s.report.zeta;
    for (int i = 0; i < n; ++i) {
        const double x = fold(grid.node(i));
        const double pix = grid.pi_node(i);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double y = fold(grid.node(j));
            const double piy = grid.pi_node(j);
            const double wy = p.server_density(y);
            const double W = mixed_arc(loc, rho, x, y);
            const double f = partial_spread(p, x, y).total() + pix * grid.g(i, j) / wy;

            const double len = arc_length(x, y);
            auto integrand = [&](double sft) {
                const double u = fold(x + sft);
                return p.server_density(u) *
                       (piy * partial_spread(p, x, u).total() + pix * partial_spread(p, y, u).total());
            };
            const std::vector<double> br = detail::arc_breaks(loc, x, len);
            double integral = integrate_pieces(integrand, std::span<const double>(br), 0.0, len, 1e-10, 1e-15);
            const int kij = ((j - i) % n + n) % n;
            const int kji = ((i - j) % n + n) % n;
            integral += pix * piy *
                        (cum[i * n1 + kij] + cum[j * n1 + n] - cum[j * n1 + kji]);
            const double inhom = lek * pix * (p.alpha() * W + rho * eb2 / (2.0 * eb) * piy + eb * piy * kappa * W);
            const double res = wy * f - rho * integral - inhom;
            const double r = std::abs(res);
            const double scale = pix * piy * zeta;
            const double ratio = scale > 0.0 ? r / scale : (r > 0.0 ? HUGE_VAL : 0.0);
            if (r > rep.max_residual) rep.max_residual = r;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst_i = i;
                rep.worst_j = j;
            }
        }
    }
    return rep;
}

void write_grid_csv(const SystemParameters& p, const FkSolution& s, const std::string& path) {
    check_grid(p, s);
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot open " + path);
    out << "i,j,x,y,g,f_k\n";
    const GridFunction& g = s.grid;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const double x = fold(g.node(i)), y = fold(g.node(j));
            const double fk = g.pi_node(i) * g.g(i, j) / p.server_density(y);
            out << fmt::format("{},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", i, j, x, y, g.g(i, j), fk);
        }
    }
}

}  // namespace polling
