#include <cmath>
#include <span>

#include "polling/exhaustive.hpp"
#include "polling/quadrature.hpp"
#include "spread_detail.hpp"

namespace polling {

namespace detail {

std::vector<double> arc_breaks(const LocationDensity& loc, double x, double len) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < loc.breakpoints().size(); ++k) {
        double s = loc.breakpoints()[k] - x;
        s -= std::floor(s);
        if (s > 0.0 && s < len) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double mass_to_depot(const LocationDensity& loc, double x) {
    return 1.0 - loc.cdf(fold(x));
}

}  // namespace detail

double expected_waiting_customers(const SystemParameters& p) {
    const double ek = p.batch().mean(), eb = p.service().mean(), rho = p.rho();
    return p.lambda() * ek / (2.0 * (1.0 - rho)) *
           (p.alpha() + rho * p.service().second_moment() / eb + eb * p.batch().factorial2() / ek);
}

double generated_wait_service(const SystemParameters& p, double x, double y) {
    return p.service().mean() * std::exp(p.rho() * p.location().arc(x, y));
}

double generated_wait_residual(const SystemParameters& p, double x, double y) {
    const double br = p.service().second_moment() / (2.0 * p.service().mean());
    return br * std::exp(p.rho() * p.location().arc(x, y));
}

double generated_wait_travel(const SystemParameters& p, double x, double y) {
    x = fold(x);
    y = fold(y);
    const double len = arc_length(x, y);
    if (len == 0.0) return 0.0;
    const LocationDensity& loc = p.location();
    const double rho = p.rho();
    auto f = [&](double s) { return std::exp(rho * loc.arc(fold(x + s), y)); };
    const std::vector<double> br = detail::arc_breaks(loc, x, len);
    return p.alpha() * integrate_pieces(f, std::span<const double>(br), 0.0, len, 1e-10, 1e-15);
}

double generated_delivery_service(const SystemParameters& p, double x, double y) {
    x = fold(x);
    y = fold(y);
    const double rho = p.rho(), eb = p.service().mean();
    const double a = detail::mass_to_depot(p.location(), x);
    if (x <= y) return eb * std::exp(rho * a);
    return eb * (std::exp(rho + rho * a) - rho * a * std::exp(rho * a));
}

double generated_delivery_travel(const SystemParameters& p, double x, double y) {
    x = fold(x);
    y = fold(y);
    const LocationDensity& loc = p.location();
    const double rho = p.rho();
    const auto& br = loc.breakpoints();
    const std::span<const double> brs(br.data(), br.size());
    auto same = [&](double u) { return std::exp(rho * (1.0 - loc.cdf(u))); };
    if (x <= y) return p.alpha() * integrate_pieces(same, brs, x, 1.0, 1e-10, 1e-15);
    auto next = [&](double u) {
        const double a = 1.0 - loc.cdf(u);
        return std::exp(rho + rho * a) - rho * a * std::exp(rho * a);
    };
    return p.alpha() * (integrate_pieces(next, brs, x, 1.0, 1e-10, 1e-15) +
                        integrate_pieces(same, brs, 0.0, 1.0, 1e-10, 1e-15));
}

PartialSpread partial_spread(const SystemParameters& p, double x, double y) {
    const LocationDensity& loc = p.location();
    const double rho = p.rho();
    const double lek = p.lambda() * p.batch().mean();
    const double eb = p.service().mean(), eb2 = p.service().second_moment();
    const double pix = loc.pdf(x), piy = loc.pdf(y);
    PartialSpread s;
    s.f_alpha = lek * pix * p.alpha() / (1.0 - rho) * mixed_arc(loc, rho, x, y);
    s.f_br = rho * piy / p.server_density(y) * lek * pix *
             (eb2 / (2.0 * eb) + rho * eb2 / ((1.0 - rho) * eb) * loc.arc(x, y));
    return s;
}

double fk_inhomogeneity(const SystemParameters& p, double x, double y) {
    const double kappa = p.batch().factorial2() / p.batch().mean();
    return p.rho() * kappa * p.location().pdf(y) * mixed_arc(p.location(), p.rho(), x, y);
}

}  // namespace polling
