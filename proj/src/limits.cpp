#include "polling/limits.hpp"

#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/gg.hpp"
#include "polling/quadrature.hpp"

namespace polling {

std::string to_string(Policy p) {
    return p == Policy::GloballyGated ? "globally_gated" : "exhaustive";
}

std::string to_string(Regime r) { return r == Regime::Light ? "light" : "heavy"; }

Policy parse_policy(const std::string& s) {
    if (s == "gg" || s == "globally_gated") return Policy::GloballyGated;
    if (s == "ex" || s == "exhaustive") return Policy::Exhaustive;
    throw Error(ErrorKind::InvalidConfig, "unknown policy '" + s + "'");
}

Regime parse_regime(const std::string& s) {
    if (s == "light") return Regime::Light;
    if (s == "heavy") return Regime::Heavy;
    throw Error(ErrorKind::InvalidConfig, "unknown regime '" + s + "'");
}

double pgf_of_tail_integral(const SystemParameters& p) {
    const LocationDensity& loc = p.location();
    if (loc.is_uniform()) return p.batch().mean_inv_k1();
    const auto& br = loc.breakpoints();
    return integrate_pieces([&](double u) { return p.batch().pgf(1.0 - loc.cdf(u)); },
                            std::span<const double>(br.data(), br.size()), 0.0, 1.0, 1e-10, 1e-15);
}

namespace {

struct Pair {
    double sojourn, delivery;
};

Pair gg_pair(const SystemParameters& p, Regime r) {
    const double eb = p.service().mean(), eb2 = p.service().second_moment();
    const double ek = p.batch().mean(), alpha = p.alpha();
    if (r == Regime::Light) {
        const double d = eb * ek + 1.5 * alpha;
        return {d - alpha * pgf_of_cdf_integral(p), d};
    }
    const double h = alpha + eb2 / (2.0 * eb) + eb * p.batch().factorial2() / (2.0 * ek);
    return {h * (0.5 + p.batch().mean_k_over_k1()), 1.5 * h};
}

Pair ex_pair(const SystemParameters& p, Regime r) {
    const double eb = p.service().mean(), eb2 = p.service().second_moment();
    const double ek = p.batch().mean(), alpha = p.alpha();
    if (r == Regime::Light)
        return {ek * eb + alpha - alpha * pgf_double_integral(p),
                eb * ek + 1.5 * alpha - alpha * pgf_of_tail_integral(p)};
    const double m = alpha + eb2 / eb + eb * p.batch().factorial2() / ek;
    const double kk1 = p.batch().mean_k_over_k1();
    return {m * kk1, m * (kk1 + 0.5)};
}

LimitReport make(Policy pol, Regime r, Pair own, Pair gg, Pair ex) {
    LimitReport rep;
    rep.policy = pol;
    rep.regime = r;
    rep.sojourn_limit = own.sojourn;
    rep.delivery_limit = own.delivery;
    rep.policy_gap_sojourn = gg.sojourn - ex.sojourn;
    rep.policy_gap_delivery = gg.delivery - ex.delivery;
    return rep;
}

}  // namespace

LimitReport gg_limits(const SystemParameters& p, Regime r) {
    const Pair gg = gg_pair(p, r), ex = ex_pair(p, r);
    return make(Policy::GloballyGated, r, gg, gg, ex);
}

LimitReport exhaustive_limits(const SystemParameters& p, Regime r) {
    const Pair gg = gg_pair(p, r), ex = ex_pair(p, r);
    return make(Policy::Exhaustive, r, ex, gg, ex);
}

PolicyGap policy_gap(const SystemParameters& p, Regime r) {
    const Pair gg = gg_pair(p, r), ex = ex_pair(p, r);
    return {gg.sojourn - ex.sojourn, gg.delivery - ex.delivery};
}

}  // namespace polling
