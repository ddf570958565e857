#pragma once

#include <string>
#include <vector>

#include "polling/limits.hpp"
#include "polling/params.hpp"

namespace polling {

// Scenario JSON (field names in README). Throws MalformedScenario for structural problems;
// parameter errors keep their own kind (InvalidParameters, Unstable).
SystemParameters parse_scenario(const std::string& json_text);
SystemParameters load_scenario(const std::string& path);

// Bundled example: alpha = 600 s, exponential picks with mean 5 s, shifted-Poisson orders of
// mean 15, demand 50/30/20 over space 20/30/50.
SystemParameters warehouse_template(double rho);

enum class SweepOutput { Sojourn, Delivery, Waiting };

struct SweepSpec {
    std::string scenario_path;        // resolved against the spec file's directory
    std::string variable = "rho_via_lambda";
    std::vector<double> values;
    std::vector<Policy> policies;
    std::vector<SweepOutput> outputs;
    bool simulate = false;
    std::int64_t sim_batches = 100000;
    int sim_replications = 5;
    std::uint64_t sim_seed = 1;
    int grid = 256;
    double delta = 1e-9;
};

std::string to_string(SweepOutput o);

// Throws InvalidConfig for a bad spec.
SweepSpec parse_sweep_spec(const std::string& json_text, const std::string& base_dir = ".");
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRow {
    double rho = 0.0;
    Policy policy = Policy::GloballyGated;
    SweepOutput metric = SweepOutput::Sojourn;
    double value = 0.0;
    double bound = 0.0;
    bool has_sim = false;
    double sim_mean = 0.0;
    double sim_ci = 0.0;
};

// Rows ordered by rho, then policy, then metric; points evaluated in parallel.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SystemParameters& base);

// Header rho,policy,metric,value,bound,sim_mean,sim_ci; sim fields empty without simulation.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace polling
