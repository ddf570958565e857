#include "polling/validate.hpp"

#include <cmath>

#include "polling/exhaustive.hpp"
#include "polling/gg.hpp"
#include "polling/simulator.hpp"

namespace polling {

namespace {

Check compare(const std::string& name, double analytic, double bound, const SimulationEstimate& e) {
    Check c{name, analytic, bound, e.mean, e.ci_half_width, std::max(3.0 * e.ci_half_width, bound), false};
    c.pass = std::abs(c.sim_mean - c.analytic) <= c.tolerance;
    return c;
}

std::vector<SimulationEstimate> run(const SystemParameters& p, Policy pol, const ValidateOptions& o) {
    SimulationConfig cfg(p);
    cfg.policy = pol;
    cfg.measured_batches = o.batches;
    cfg.replications = o.replications;
    cfg.seed = o.seed;
    return simulate(cfg);
}

}  // namespace

std::vector<Check> validate_scenario(const SystemParameters& p, const ValidateOptions& o) {
    std::vector<Check> out;
    const double ec = p.alpha() / (1.0 - p.rho());

    const auto gs = run(p, Policy::GloballyGated, o);
    const CycleStatistics cs = cycle_moments(p);
    out.push_back(compare("gg.sojourn", gg_mean_sojourn(p), 0.0, estimate(gs, "sojourn")));
    out.push_back(compare("gg.delivery", gg_mean_delivery(p), 0.0, estimate(gs, "delivery")));
    out.push_back(compare("gg.cycle_mean", cs.mean_c, 0.0, estimate(gs, "cycle_mean")));
    out.push_back(compare("gg.cycle_second_moment", cs.second_moment_c, 0.0, estimate(gs, "cycle_second_moment")));
    out.push_back(compare("gg.busy_fraction", p.rho(), 0.0, estimate(gs, "busy_fraction")));
    const SimulationEstimate& gv = estimate(gs, "gate_violations");
    out.push_back({"gg.gate_violations", 0.0, 0.0, gv.mean, 0.0, 0.0, gv.mean == 0.0});

    const auto es = run(p, Policy::Exhaustive, o);
    const FkSolution fk = solve_fk(p, {o.grid, o.delta});
    const BoundedValue s = exhaustive_mean_sojourn(p, fk);
    const BoundedValue d = exhaustive_mean_delivery(p, fk);
    out.push_back(compare("exhaustive.sojourn", s.value, s.bound, estimate(es, "sojourn")));
    out.push_back(compare("exhaustive.delivery", d.value, d.bound, estimate(es, "delivery")));
    out.push_back(compare("exhaustive.waiting", expected_waiting_customers(p), 0.0, estimate(es, "waiting")));
    out.push_back(compare("exhaustive.cycle_mean", ec, 0.0, estimate(es, "cycle_mean")));
    out.push_back(compare("exhaustive.busy_fraction", p.rho(), 0.0, estimate(es, "busy_fraction")));
    return out;
}

}  // namespace polling
