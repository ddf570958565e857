#pragma once

#include "polling/params.hpp"

namespace fixtures {

using namespace polling;

// alpha 1, lambda 0.5, K = 1, B = 1, uniform.
inline SystemParameters s0() {
    return SystemParameters(0.5, 1.0, BatchSize::deterministic(1), ServiceTime::deterministic(1.0),
                            LocationDensity::uniform());
}

// Same travel and service, K = 2, lambda 0.25 (rho 0.5).
inline SystemParameters k2() {
    return SystemParameters(0.25, 1.0, BatchSize::deterministic(2), ServiceTime::deterministic(1.0),
                            LocationDensity::uniform());
}

// Shifted-Poisson batches, exponential service, three-class density.
inline SystemParameters mixed(double rho = 0.6) {
    return SystemParameters(0.1, 2.0, BatchSize::shifted_poisson(3.0), ServiceTime::exponential(1.0),
                            LocationDensity::piecewise_uniform({0.0, 0.2, 0.5}, {0.5, 0.3, 0.2}))
        .with_rho(rho);
}

// pi(x) = 0.5 + x.
inline LocationDensity linear() { return LocationDensity::piecewise({Segment{0.0, {0.5, 1.0, 0.0, 0.0}}}); }

// pi(x) = 2x.
inline LocationDensity ramp() { return LocationDensity::piecewise({Segment{0.0, {0.0, 2.0, 0.0, 0.0}}}); }

// Uniform on [a, b) with the rest of the circle empty.
inline LocationDensity window(double a, double b) {
    std::vector<double> br{0.0}, m{0.0};
    if (a > 0.0) {
        br.push_back(a);
        m.push_back(1.0);
    } else {
        m[0] = 1.0;
    }
    if (b < 1.0) {
        br.push_back(b);
        m.push_back(0.0);
    }
    return LocationDensity::piecewise_uniform(br, m);
}

// Demand 50/30/20 over space 20/30/50.
inline LocationDensity classes() {
    return LocationDensity::piecewise_uniform({0.0, 0.2, 0.5}, {0.5, 0.3, 0.2});
}

}  // namespace fixtures
