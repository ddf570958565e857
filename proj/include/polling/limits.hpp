#pragma once

#include <string>

#include "polling/params.hpp"

namespace polling {

enum class Policy { GloballyGated, Exhaustive };
enum class Regime { Light, Heavy };

std::string to_string(Policy p);
std::string to_string(Regime r);
// Accepts "gg"/"globally_gated" and "exhaustive"/"ex"; throws InvalidConfig otherwise.
Policy parse_policy(const std::string& s);
Regime parse_regime(const std::string& s);

struct LimitReport {
    Policy policy = Policy::GloballyGated;
    Regime regime = Regime::Light;
    // Light: limits of the means as lambda -> 0 (time units).
    // Heavy: limits of (1 - rho) * mean as rho -> 1 (see scaling()).
    double sojourn_limit = 0.0;
    double delivery_limit = 0.0;
    // GG minus exhaustive, same units as the limits.
    double policy_gap_sojourn = 0.0;
    double policy_gap_delivery = 0.0;

    // "mean" or "(1-rho)*mean".
    const char* scaling() const { return regime == Regime::Light ? "mean" : "(1-rho)*mean"; }
};

struct PolicyGap {
    double sojourn = 0.0;
    double delivery = 0.0;
};

// lambda only enters structurally; heavy limits do not depend on the location density.
LimitReport gg_limits(const SystemParameters& p, Regime r);
LimitReport exhaustive_limits(const SystemParameters& p, Regime r);
PolicyGap policy_gap(const SystemParameters& p, Regime r);

// Integral over [0, 1] of K(1 - Pi(u)).
double pgf_of_tail_integral(const SystemParameters& p);

}  // namespace polling
