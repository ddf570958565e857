#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polling/params.hpp"

namespace polling {

// Mean number of waiting customers (independent of pi).
double expected_waiting_customers(const SystemParameters& p);

// Generated waiting times; all use the zero-arc convention at x == y.
double generated_wait_service(const SystemParameters& p, double x, double y);
double generated_wait_residual(const SystemParameters& p, double x, double y);
double generated_wait_travel(const SystemParameters& p, double x, double y);
double generated_delivery_service(const SystemParameters& p, double x, double y);
double generated_delivery_travel(const SystemParameters& p, double x, double y);

struct PartialSpread {
    double f_alpha = 0.0;
    double f_br = 0.0;
    double total() const { return f_alpha + f_br; }
};

PartialSpread partial_spread(const SystemParameters& p, double x, double y);

// Inhomogeneous term of the g-equation: rho E[K(K-1)]/E[K] pi(y) int*_x^y (rho pi + 1 - rho).
double fk_inhomogeneity(const SystemParameters& p, double x, double y);

// Integral over u and x of K(int*_u^x pi), unweighted.
double pgf_double_integral(const SystemParameters& p);

struct SolverOptions {
    int n = 256;
    double delta = 1e-9;
    int max_iterations = 100000;
};

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(int n, double shift, std::vector<double> g, std::vector<double> h_full,
                 std::vector<double> pi_nodes, std::uint64_t fingerprint);

    int n() const { return n_; }
    double shift() const { return shift_; }
    // Grid node x_i = i / n + shift.
    double node(int i) const { return static_cast<double>(i) / n_ + shift_; }
    // Iterate value g(x_i, x_j); g(x_i, x_i) = 0 under the zero-arc convention.
    double g(int i, int j) const { return g_[static_cast<std::size_t>(i) * n_ + j]; }
    // g / pi(y) along row i at clockwise offset k / n, k = 0..n (k = n is the full lap).
    double h_node(int i, int k) const { return h_[static_cast<std::size_t>(i) * (n_ + 1) + k]; }
    // Bilinear interpolation of g(x, y) / pi(y) in (x, d(x, y)).
    double h(double x, double y) const;
    double pi_node(int i) const { return pi_[static_cast<std::size_t>(i)]; }
    std::uint64_t fingerprint() const { return fingerprint_; }
    const std::vector<double>& values() const { return g_; }

private:
    int n_ = 0;
    double shift_ = 0.0;
    std::vector<double> g_;
    std::vector<double> h_;
    std::vector<double> pi_;
    std::uint64_t fingerprint_ = 0;
};

struct IterationRecord {
    double max_diff = 0.0;           // sup |g_m - g_{m-1}|
    double max_weighted_diff = 0.0;  // sup |g_m - g_{m-1}| / pi(x_j)
};

struct SolverReport {
    double riemann_sum = 0.0;          // (1/N) sum pi(x_m) on the chosen grid
    double regularity_margin = 0.0;    // 1/rho - riemann_sum
    std::optional<double> shift_applied;
    double epsilon = 0.0;              // discretisation term of the certified bound
    double zeta = 0.0;                 // |g_n - g| <= pi(x_j) * zeta at grid nodes
    double error_bound_g = 0.0;        // sup_j pi(x_j) * zeta
    double error_bound_esb = 0.0;
    double error_bound_ed = 0.0;
    int iterations = 0;
    double achieved_delta = 0.0;
    std::vector<IterationRecord> history;
    const char* kernel = "";

    // 4 rho sup(pi) (rho riemann_sum)^(m-2) |g_1 - g_0|: the contraction envelope for iteration m >= 4
    // (1-based). Without the sup(pi) factor it also bounds max_weighted_diff.
    double envelope(const SystemParameters& p, int m) const;
};

struct FkSolution {
    GridFunction grid;
    SolverReport report;
};

// Successive substitution for g on the (possibly shifted) grid. Throws RegularityViolation or
// NonPositiveDensity when no admissible shift exists.
FkSolution solve_fk(const SystemParameters& p, const SolverOptions& opts = {});

// Interpolated f_K(x, y) = pi(x) pi(y) h(x, y) / (rho pi(y) + 1 - rho).
double fk_value(const SystemParameters& p, const FkSolution& s, double x, double y);
// Full spread f = f_alpha + f_br + f_K. Throws GridMismatch.
double spread(const SystemParameters& p, const FkSolution& s, double x, double y);

struct BoundedValue {
    double value = 0.0;
    double bound = 0.0;
};

BoundedValue exhaustive_mean_sojourn(const SystemParameters& p, const FkSolution& s);
BoundedValue exhaustive_mean_delivery(const SystemParameters& p, const FkSolution& s);

// Closed form of the mass identity: lambda E[K] / (2 (1 - rho)) (alpha + lambda E[K] E[B^2] + E[B] E[K(K-1)] / E[K]).
double spread_mass_closed_form(const SystemParameters& p);
// Integral of (rho pi(u) + 1 - rho) f(x, u) over the torus; bound is the f_K contribution.
BoundedValue spread_mass(const SystemParameters& p, const FkSolution& s);

struct ResidualReport {
    double max_residual = 0.0;    // max over grid nodes of |residual(x_i, x_j)|
    double max_ratio = 0.0;       // max of |residual| / (pi(x_i) pi(x_j) zeta)
    int worst_i = 0, worst_j = 0;
};

// Plugs the assembled f into the full integral equation at every grid node.
ResidualReport spread_residual(const SystemParameters& p, const FkSolution& s);

// Writes i, j, x, y, g, f_k rows.
void write_grid_csv(const SystemParameters& p, const FkSolution& s, const std::string& path);

}  // namespace polling
