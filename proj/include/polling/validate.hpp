#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polling/params.hpp"

namespace polling {

struct ValidateOptions {
    std::int64_t batches = 100000;
    int replications = 5;
    std::uint64_t seed = 1;
    int grid = 256;
    double delta = 1e-9;
};

struct Check {
    std::string name;
    double analytic = 0.0;
    double bound = 0.0;      // certified analytic error, 0 when exact
    double sim_mean = 0.0;
    double sim_ci = 0.0;
    double tolerance = 0.0;  // max(3 ci, bound)
    bool pass = false;
};

// Analytic results of both policies against simulation of the same scenario.
std::vector<Check> validate_scenario(const SystemParameters& p, const ValidateOptions& opts = {});

}  // namespace polling
