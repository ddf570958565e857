#pragma once

#include <cstdint>
#include <vector>

#include "polling/rng.hpp"

namespace polling {

class BatchSize {
public:
    enum class Kind { Deterministic, Pmf, ShiftedPoisson };

    static BatchSize deterministic(int k0);
    // p[0] = P(K = 1), p[1] = P(K = 2), ...
    static BatchSize pmf(std::vector<double> p);
    // K = 1 + Poisson(mean - 1), truncated at ceil(mean + 12 sqrt(mean)) and renormalized.
    static BatchSize shifted_poisson(double mean);

    Kind kind() const { return kind_; }
    int kmax() const { return static_cast<int>(probs_.size()) - 1; }
    // probs()[k] = P(K = k); probs()[0] == 0.
    const std::vector<double>& probs() const { return probs_; }
    double truncated_mass() const { return truncated_; }

    double pgf(double z) const;
    double pgf_d1(double z) const;
    double pgf_d2(double z) const;
    // 1 - pgf(1 - u), accurate for small u.
    double pgf_complement(double u) const;

    double mean() const { return m1_; }
    double factorial2() const { return m2f_; }        // E[K(K-1)]
    double mean_k_over_k1() const { return kk1_; }    // E[K/(K+1)]
    double mean_inv_k1() const { return ik1_; }       // E[1/(K+1)]

    int sample(double u) const;
    std::uint64_t fingerprint() const;

private:
    BatchSize(Kind kind, std::vector<double> probs, double truncated);
    Kind kind_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
    double truncated_ = 0.0;
    double m1_ = 0, m2f_ = 0, kk1_ = 0, ik1_ = 0;
};

class ServiceTime {
public:
    enum class Kind { Deterministic, Exponential, Moments };

    static ServiceTime deterministic(double b);
    static ServiceTime exponential(double rate);
    // Two-moment description; transform and sampling use the gamma law with these moments.
    static ServiceTime moments(double mean, double second_moment);

    Kind kind() const { return kind_; }
    double mean() const { return m1_; }
    double second_moment() const { return m2_; }
    double lst(double omega) const;
    // 1 - lst(omega), accurate for small omega.
    double lst_complement(double omega) const;
    double sample(Rng& rng) const;
    std::uint64_t fingerprint() const;

private:
    ServiceTime(Kind kind, double m1, double m2);
    Kind kind_;
    double m1_, m2_;
    double shape_ = 0.0, scale_ = 0.0;
};

}  // namespace polling
