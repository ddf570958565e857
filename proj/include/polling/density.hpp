#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace polling {

// One piece of a piecewise-polynomial density: pi(x) = c0 + c1 x + c2 x^2 + c3 x^3
// on [start, next start). Coefficients are in the global coordinate x.
struct Segment {
    double start = 0.0;
    std::array<double, 4> coeffs{};
};

// Folds a position into [0, 1); 1 maps to 0.
double fold(double x);

// Clockwise distance d(a, b); zero when a == b.
double arc_length(double a, double b);

class LocationDensity {
public:
    static LocationDensity uniform();
    static LocationDensity piecewise(std::vector<Segment> segments, bool normalize = false);
    // breaks[0] == 0, one mass per piece; densities are mass / width.
    static LocationDensity piecewise_uniform(const std::vector<double>& breaks,
                                             const std::vector<double>& masses);

    // (pi + eps) / (1 + eps): the uniform floor recommended for densities with zeros.
    LocationDensity with_floor(double eps) const;

    double pdf(double x) const;
    // Pi(x) on [0, 1]; cdf(1) == 1.
    double cdf(double x) const;
    // Circular integral of pi from a to b (zero-arc convention).
    double arc(double a, double b) const;
    // Same, but a == b yields the full circle.
    double arc_full(double a, double b) const;
    // Inverse cdf.
    double sample(double u) const;

    double sup() const { return sup_; }
    double inf() const { return inf_; }
    double sup_on(double a, double b) const;
    double inf_on(double a, double b) const;

    const std::vector<Segment>& segments() const { return segs_; }
    // Segment starts plus the closing 1.
    const std::vector<double>& breakpoints() const { return breaks_; }
    bool is_uniform() const;
    std::uint64_t fingerprint() const;

private:
    explicit LocationDensity(std::vector<Segment> segs);
    std::size_t segment_of(double x) const;
    double seg_value(std::size_t s, double x) const;
    double seg_antider(std::size_t s, double x) const;
    void seg_extrema(std::size_t s, double a, double b, double& lo, double& hi) const;

    std::vector<Segment> segs_;
    std::vector<double> breaks_;
    std::vector<double> cum_;   // Pi at each segment start, plus Pi(1)
    double sup_ = 0.0;
    double inf_ = 0.0;
};

// Integral of the weight rho * pi + 1 - rho along the clockwise arc from a to b.
double mixed_arc(const LocationDensity& pi, double rho, double a, double b);

}  // namespace polling
