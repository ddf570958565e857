#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/kernels.hpp"
#include "polling/quadrature.hpp"

namespace polling {

GridFunction::GridFunction(int n, double shift, std::vector<double> values, std::vector<double> h_full,
                           std::vector<double> pi_nodes, std::uint64_t fingerprint)
    : n_(n), shift_(shift), g_(std::move(values)), pi_(std::move(pi_nodes)), fingerprint_(fingerprint) {
    const std::size_t n1 = static_cast<std::size_t>(n_) + 1;
    h_.assign(static_cast<std::size_t>(n_) * n1, 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int k = 1; k < n_; ++k) {
            const int j = (i + k) % n_;
            h_[i * n1 + k] = g(i, j) / pi_[static_cast<std::size_t>(j)];
        }
        h_[i * n1 + n_] = h_full[static_cast<std::size_t>(i)];
    }
}

double GridFunction::h(double x, double y) const {
    const double t = arc_length(fold(x), fold(y));
    double theta = (x - shift_) * n_;
    theta -= n_ * std::floor(theta / n_);
    int i0 = static_cast<int>(theta);
    if (i0 >= n_) i0 = n_ - 1;
    const double a = theta - i0;
    const int i1 = (i0 + 1) % n_;
    const double phi = t * n_;
    int k0 = static_cast<int>(phi);
    if (k0 >= n_) k0 = n_ - 1;
    const double b = phi - k0;
    const double r0 = (1.0 - b) * h_node(i0, k0) + b * h_node(i0, k0 + 1);
    const double r1 = (1.0 - b) * h_node(i1, k0) + b * h_node(i1, k0 + 1);
    return (1.0 - a) * r0 + a * r1;
}

namespace {

struct ShiftChoice {
    int k = -1;
    double riemann = 0.0;
};

double riemann_sum(const LocationDensity& loc, int n, double shift, bool& positive) {
    double s = 0.0;
    positive = true;
    for (int m = 0; m < n; ++m) {
        const double v = loc.pdf(static_cast<double>(m) / n + shift);
        if (!(v > 0.0)) positive = false;
        s += v;
    }
    return s / n;
}

ShiftChoice choose_shift(const SystemParameters& p, int n) {
    const double rho = p.rho();
    ShiftChoice best;
    double best_margin = -std::numeric_limits<double>::infinity();
    bool any_positive = false;
    for (int k = 0; k < 16; ++k) {
        bool positive = false;
        const double r = riemann_sum(p.location(), n, k / (16.0 * n), positive);
        if (!positive) continue;
        any_positive = true;
        if (!(rho * r < 1.0)) continue;
        const double margin = 1.0 - rho * r;
        if (k == 0) return {0, r};
        if (margin > best_margin) {
            best_margin = margin;
            best = {k, r};
        }
    }
    if (best.k >= 0) return best;
    if (!any_positive)
        throw Error(ErrorKind::NonPositiveDensity,
                    "location density vanishes at a grid node for every shift; add a uniform floor "
                    "(e.g. with_floor(1e-8)) and renormalize");
    throw Error(ErrorKind::RegularityViolation,
                "Riemann sum of pi exceeds 1/rho for every grid shift");
}

// Integral of F over the clockwise cell [a, a + len], split at density breakpoints.
template <class F>
double cell_integral(const LocationDensity& loc, double a, double len, F&& f) {
    auto g = [&](double s) { return f(fold(a + s)); };
    std::vector<double> br;
    for (std::size_t k = 0; k + 1 < loc.breakpoints().size(); ++k) {
        double s = loc.breakpoints()[k] - a;
        s -= std::floor(s);
        if (s > 0.0 && s < len) br.push_back(s);
    }
    std::sort(br.begin(), br.end());
    return integrate_pieces(g, std::span<const double>(br), 0.0, len, 1e-12, 1e-18);
}

double cell_sup(const LocationDensity& loc, double a, double len) {
    a = fold(a);
    if (a + len <= 1.0) return loc.sup_on(a, a + len);
    return std::max(loc.sup_on(a, 1.0), loc.sup_on(0.0, a + len - 1.0));
}

double cell_inf(const LocationDensity& loc, double a, double len) {
    a = fold(a);
    if (a + len <= 1.0) return loc.inf_on(a, a + len);
    return std::min(loc.inf_on(a, 1.0), loc.inf_on(0.0, a + len - 1.0));
}

}  // namespace

double SolverReport::envelope(const SystemParameters& p, int m) const {
    if (history.empty()) return 0.0;
    return 4.0 * p.rho() * p.location().sup() * std::pow(p.rho() * riemann_sum, m - 2) * history.front().max_diff;
}

FkSolution solve_fk(const SystemParameters& p, const SolverOptions& opts) {
    const int n = opts.n;
    if (n < 16) throw Error(ErrorKind::InvalidParameters, "grid resolution must be at least 16");
    if (!(opts.delta > 0.0)) throw Error(ErrorKind::InvalidParameters, "delta must be positive");
    const LocationDensity& loc = p.location();
    const double rho = p.rho();
    const double kappa = p.batch().factorial2() / p.batch().mean();

    const ShiftChoice sc = choose_shift(p, n);
    const double shift = sc.k / (16.0 * n);
    const std::size_t N = static_cast<std::size_t>(n);

    std::vector<double> x(N), pi(N), inv_pi(N);
    for (std::size_t m = 0; m < N; ++m) {
        x[m] = static_cast<double>(m) / n + shift;
        pi[m] = loc.pdf(x[m]);
        inv_pi[m] = 1.0 / pi[m];
    }

    std::vector<double> b(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) b[i * N + j] = rho * kappa * pi[j] * mixed_arc(loc, rho, x[i], x[j]);

    std::vector<double> g(N * N, 0.0), gn(N * N, 0.0);
    std::vector<double> P(N * (N + 1)), Q(N * N), D(N), T(N);
    const kernels::RowUpdateFn kernel = kernels::row_update();
    const double scale = rho / n;

    SolverReport rep;
    rep.kernel = kernels::row_update_name();
    rep.riemann_sum = sc.riemann;
    rep.regularity_margin = rho > 0.0 ? 1.0 / rho - sc.riemann : std::numeric_limits<double>::infinity();
    if (sc.k > 0) rep.shift_applied = shift;

    for (int it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < N; ++i) {
            double* pr = &P[i * (N + 1)];
            pr[0] = 0.0;
            for (std::size_t m = 0; m < N; ++m) pr[m + 1] = pr[m] + g[i * N + m];
            D[i] = pr[i];
            T[i] = pr[N];
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) Q[i * N + j] = P[j * (N + 1) + i];

        kernels::RowDiff diff;
        for (std::size_t i = 0; i < N; ++i) {
            const double* pr = &P[i * (N + 1)];
            kernels::RowArgs a{pr, T[i] - pr[i], D.data(), &Q[i * N], T.data(), pi.data(),
                               inv_pi.data(), &b[i * N], &g[i * N], &gn[i * N], scale};
            kernel(a, 0, i, diff);
            a.c1 = -pr[i];
            a.t = nullptr;
            kernel(a, i, N, diff);
        }
        g.swap(gn);
        rep.iterations = it + 1;
        rep.history.push_back({diff.max_abs, diff.max_weighted});
        rep.achieved_delta = diff.max_abs;
        if (diff.max_abs <= opts.delta) break;
    }

    std::vector<double> h_full(N);
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t m = 0; m < N; ++m) s += g[i * N + m];
        h_full[i] = 2.0 * rho * s / n + rho * kappa;
    }

    // Certified bound, evaluated term by term on the chosen grid.
    const double len = 1.0 / n;
    const double pi_max = loc.sup();
    const double bnorm = rho * kappa * pi_max;
    const double r = sc.riemann;
    const double c_w = 2.0 * rho * (1.0 + rho) / (1.0 - rho);
    double t1 = 0.0, t3 = 0.0, max_cell_w = 0.0, eby = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
        const double cell_pi = loc.arc(x[m], x[m] + len);
        t1 += pi[m] * (len + c_w * cell_pi);
        const double pm = pi[m];
        t3 += cell_integral(loc, x[m], len, [&](double u) { return std::abs(pm - loc.pdf(u)); });
        const double cell_w = rho * cell_pi + (1.0 - rho) * len;
        max_cell_w = std::max(max_cell_w, cell_w);
        const double sup_c = cell_sup(loc, x[m], len), inf_c = cell_inf(loc, x[m], len);
        const double var = std::max(sup_c - pm, pm - inf_c);
        eby = std::max(eby, var + sup_c * cell_w);
    }
    t1 *= 4.0 * rho * rho * (2.0 - rho) * bnorm / (1.0 - rho) / n;
    const double ebx = rho * kappa * pi_max * max_cell_w;
    const double t2 = 2.0 * rho * rho * (1.0 + rho) / (1.0 - rho) * ebx * r;
    t3 *= 4.0 * rho * rho * (1.0 + rho) / (1.0 - rho) * bnorm / n;
    const double t4 = 2.0 * rho * rho * kappa * eby;
    rep.epsilon = t1 + t2 + t3 + t4;
    const double q = rho * r;
    rep.zeta = 4.0 * rho * opts.delta / (1.0 - q) + 2.0 * rho * rep.epsilon * q / (1.0 - q) + rep.epsilon;
    rep.error_bound_g = rep.zeta * *std::max_element(pi.begin(), pi.end());
    const double eb = p.service().mean();
    const double em1 = rho > 0.0 ? std::expm1(rho) / rho : 1.0;
    rep.error_bound_esb = eb * rep.zeta * em1;
    rep.error_bound_ed = eb * rep.zeta * std::exp(2.0 * rho);

    FkSolution out{GridFunction(n, shift, std::move(g), std::move(h_full), std::move(pi), p.fingerprint()),
                   std::move(rep)};
    return out;
}

}  // namespace polling
