#include "polling/gg.hpp"

#include <cmath>
#include <span>

#include "polling/quadrature.hpp"

namespace polling {

namespace {

double delta_step(const SystemParameters& p, double x) {
    return p.lambda() * p.batch().pgf_complement(p.service().lst_complement(x));
}

// Sum of the delta series plus the geometric tail estimate.
double delta_sum(const SystemParameters& p, double omega, double* tail) {
    double s = 0.0;
    double d = omega;
    const double tol = 1e-14;
    while (d >= tol) {
        s += d;
        d = delta_step(p, d);
    }
    s += d;
    const double t = p.rho() < 1.0 ? d * p.rho() / (1.0 - p.rho()) : 0.0;
    if (tail) *tail = t;
    return s + t;
}

}  // namespace

std::vector<double> delta_sequence(const SystemParameters& p, double omega, double tol) {
    std::vector<double> seq{omega};
    while (seq.back() >= tol) seq.push_back(delta_step(p, seq.back()));
    return seq;
}

LstEvaluation cycle_lst_eval(const SystemParameters& p, double omega) {
    double tail = 0.0;
    const double s = delta_sum(p, omega, &tail);
    const double v = std::exp(-p.alpha() * s);
    return {v, v * p.alpha() * tail};
}

double cycle_lst(const SystemParameters& p, double omega) {
    return cycle_lst_eval(p, omega).value;
}

CycleStatistics cycle_moments(const SystemParameters& p) {
    const double rho = p.rho(), a = p.alpha(), lam = p.lambda();
    const double ek = p.batch().mean(), eb = p.service().mean();
    CycleStatistics c;
    c.mean_c = a / (1.0 - rho);
    c.second_moment_c = (a * a + 2.0 * rho * a * c.mean_c +
                         lam * ek * p.service().second_moment() * c.mean_c +
                         lam * eb * eb * p.batch().factorial2() * c.mean_c) /
                        (1.0 - rho * rho);
    c.mean_length_biased = c.second_moment_c / c.mean_c;
    c.mean_residual = 0.5 * c.mean_length_biased;
    return c;
}

double cycle_age_residual_lst(const SystemParameters& p, double omega_p, double omega_r) {
    const double ec = cycle_moments(p).mean_c;
    if (omega_p == omega_r) {
        const double h = 1e-5 * std::max(1.0, omega_p);
        const double lo = std::max(0.0, omega_p - h);
        const double hi = lo + 2.0 * h;
        return (cycle_lst(p, lo) - cycle_lst(p, hi)) / ((hi - lo) * ec);
    }
    return (cycle_lst(p, omega_r) - cycle_lst(p, omega_p)) / ((omega_p - omega_r) * ec);
}

double gg_delivery_lst(const SystemParameters& p, double omega) {
    if (omega == 0.0) return 1.0;
    const double ec = cycle_moments(p).mean_c;
    const double u = p.service().lst_complement(omega);
    const double shift = p.lambda() * p.batch().pgf_complement(u);
    const double kb = 1.0 - p.batch().pgf_complement(u);
    const double bracket = cycle_lst(p, shift) - cycle_lst(p, omega + shift);
    return kb * std::exp(-omega * p.alpha()) * bracket / (omega * ec);
}

double gg_mean_delivery(const SystemParameters& p) {
    const CycleStatistics c = cycle_moments(p);
    return p.service().mean() * p.batch().mean() + p.alpha() + (1.0 + 2.0 * p.rho()) * c.mean_residual;
}

double gg_sojourn_lst(const SystemParameters& p, double omega) {
    if (omega == 0.0) return 1.0;
    const double ec = cycle_moments(p).mean_c;
    const double phib = p.service().lst(omega);
    const double u = p.service().lst_complement(omega);
    const LocationDensity& loc = p.location();
    auto f = [&](double x) {
        const double big_pi = loc.cdf(x);
        const double shift = p.lambda() * p.batch().pgf_complement(big_pi * u);
        return loc.pdf(x) * p.batch().pgf_d1(big_pi * phib) * std::exp(-omega * p.alpha() * x) *
               (cycle_lst(p, shift) - cycle_lst(p, omega + shift));
    };
    const auto& br = loc.breakpoints();
    const double integral =
        integrate_pieces(f, std::span<const double>(br.data(), br.size()), 0.0, 1.0, 1e-9, 1e-15);
    return phib * integral / (omega * ec);
}

double pgf_of_cdf_integral(const SystemParameters& p) {
    const LocationDensity& loc = p.location();
    if (loc.is_uniform()) return p.batch().mean_inv_k1();
    auto f = [&](double x) { return p.batch().pgf(loc.cdf(x)); };
    const auto& br = loc.breakpoints();
    return integrate_pieces(f, std::span<const double>(br.data(), br.size()), 0.0, 1.0, 1e-12, 1e-16);
}

double gg_mean_sojourn(const SystemParameters& p) {
    const CycleStatistics c = cycle_moments(p);
    return p.service().mean() * p.batch().mean() + c.mean_residual + p.alpha() -
           p.alpha() * pgf_of_cdf_integral(p) +
           p.rho() * c.mean_length_biased * p.batch().mean_k_over_k1();
}

}  // namespace polling
