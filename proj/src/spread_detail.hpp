#pragma once

#include <algorithm>
#include <vector>

#include "polling/density.hpp"

namespace polling::detail {

// Offsets s in (0, len) at which fold(x + s) meets a density breakpoint, sorted.
std::vector<double> arc_breaks(const LocationDensity& loc, double x, double len);

// Integral of pi from x to the depot at 1.
double mass_to_depot(const LocationDensity& loc, double x);

}  // namespace polling::detail
