#pragma once

#include <vector>

#include "polling/params.hpp"

namespace polling {

struct CycleStatistics {
    double mean_c = 0.0;
    double second_moment_c = 0.0;
    double mean_residual = 0.0;        // E[C_R] = E[C^2] / (2 E[C])
    double mean_length_biased = 0.0;   // E[C*] = E[C^2] / E[C]
};

struct LstEvaluation {
    double value = 0.0;
    double tolerance = 0.0;   // bound on |value - exact| from truncating the delta series
};

// delta_0 = omega, delta_{i+1} = lambda [1 - K(phi_B(delta_i))]; stops at the first term below tol.
std::vector<double> delta_sequence(const SystemParameters& p, double omega, double tol = 1e-14);

LstEvaluation cycle_lst_eval(const SystemParameters& p, double omega);
double cycle_lst(const SystemParameters& p, double omega);
CycleStatistics cycle_moments(const SystemParameters& p);

// E[exp(-wp C_P - wr C_R)] seen by an arriving batch; wp == wr gives the C* transform.
double cycle_age_residual_lst(const SystemParameters& p, double omega_p, double omega_r);

double gg_delivery_lst(const SystemParameters& p, double omega);
double gg_mean_delivery(const SystemParameters& p);
double gg_sojourn_lst(const SystemParameters& p, double omega);
double gg_mean_sojourn(const SystemParameters& p);

// Integral over [0, 1] of K(Pi(x)).
double pgf_of_cdf_integral(const SystemParameters& p);

}  // namespace polling
