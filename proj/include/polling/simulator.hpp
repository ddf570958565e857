#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polling/limits.hpp"
#include "polling/params.hpp"

namespace polling {

struct SimulationConfig {
    explicit SimulationConfig(SystemParameters p) : params(std::move(p)) {}

    SystemParameters params;
    Policy policy = Policy::GloballyGated;
    std::int64_t warmup_batches = -1;     // negative: default_warmup(params)
    std::int64_t measured_batches = 100000;
    int replications = 5;
    std::uint64_t seed = 1;
    std::string trace_path;               // replication 0 only; empty disables
};

struct SimulationEstimate {
    std::string metric;
    double mean = 0.0;
    double ci_half_width = 0.0;   // 95%, Student t over replication means
    int replications = 0;
    std::int64_t total_batches = 0;
};

enum class ProbeMetric { Cycle, Delivery, Sojourn };

struct Probe {
    ProbeMetric metric;
    double omega;
};

std::string to_string(ProbeMetric m);
ProbeMetric parse_probe_metric(const std::string& s);

// ceil(10 E[C] lambda): ten mean cycles worth of batches.
std::int64_t default_warmup(const SystemParameters& p);

// Metrics, in order: sojourn, delivery, waiting (time-average waiting customers), busy_fraction,
// cycle_mean, cycle_second_moment, cycles (per replication), gate_violations, then one
// "lst_<metric>@<omega>" entry per probe. Throws InvalidConfig.
std::vector<SimulationEstimate> simulate(const SimulationConfig& cfg,
                                         std::span<const Probe> probes = {});

SimulationEstimate lst_probe(const SimulationConfig& cfg, ProbeMetric metric, double omega);

// Throws InvalidConfig when the metric is absent.
const SimulationEstimate& estimate(const std::vector<SimulationEstimate>& all,
                                   const std::string& metric);

// Student t 95% half-width of the mean of xs (0 for a single value).
double t_half_width(const std::vector<double>& xs);

}  // namespace polling
