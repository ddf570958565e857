#include <CLI11.hpp>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <optional>
#include <string>

#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/gg.hpp"
#include "polling/limits.hpp"
#include "polling/scenario.hpp"
#include "polling/simulator.hpp"
#include "polling/validate.hpp"

using namespace polling;

namespace {

struct Out {
    std::string text;
    void kv(const std::string& key, double v) { text += fmt::format("{}={:.9g}\n", key, v); }
    void kv(const std::string& key, const std::string& v) { text += fmt::format("{}={}\n", key, v); }
    void line(const std::string& s) { text += s + "\n"; }
};

void emit(const Out& o, const std::string& path) {
    std::fputs(o.text.c_str(), stdout);
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path);
    f << o.text;
}

SystemParameters scenario(const std::string& path, std::optional<double> rho) {
    SystemParameters p = load_scenario(path);
    return rho ? p.with_rho(*rho) : p;
}

void header(Out& o, const SystemParameters& p) {
    o.kv("lambda", p.lambda());
    o.kv("rho", p.rho());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous polling system analysis"};
    app.require_subcommand(1);

    std::string scen, out, spec, policy = "gg", regime = "light", trace, grid_csv;
    std::optional<double> rho;
    int grid = 256, reps = 5;
    double delta = 1e-9;
    std::uint64_t seed = 1;
    std::int64_t batches = 100000, warmup = -1;

    auto add_scenario = [&](CLI::App* c) {
        c->add_option("scenario", scen, "scenario JSON")->required();
        c->add_option("--rho", rho, "override the load (rescales lambda)");
        c->add_option("--out", out, "also write the output to this file");
    };
    auto add_solver = [&](CLI::App* c) {
        c->add_option("--grid", grid, "grid size N")->check(CLI::PositiveNumber);
        c->add_option("--delta", delta, "iteration stopping tolerance")->check(CLI::PositiveNumber);
    };
    auto add_sim = [&](CLI::App* c) {
        c->add_option("--seed", seed, "64-bit seed");
        c->add_option("--replications", reps, "independent replications");
        c->add_option("--batches", batches, "measured batches per replication");
    };

    auto* gg = app.add_subcommand("gg", "exact globally-gated means and cycle statistics");
    add_scenario(gg);
    auto* ex = app.add_subcommand("exhaustive", "exhaustive means with certified bounds");
    add_scenario(ex);
    add_solver(ex);
    ex->add_option("--grid-csv", grid_csv, "write the solved grid");
    auto* sim = app.add_subcommand("simulate", "discrete-event simulation");
    add_scenario(sim);
    add_sim(sim);
    sim->add_option("--policy", policy, "gg | exhaustive");
    sim->add_option("--warmup", warmup, "warmup batches (default: ten mean cycles)");
    sim->add_option("--trace", trace, "event trace CSV of replication 0");
    auto* lim = app.add_subcommand("limits", "light- and heavy-traffic limits");
    add_scenario(lim);
    lim->add_option("--regime", regime, "light | heavy");
    auto* sw = app.add_subcommand("sweep", "rho sweep to CSV");
    sw->add_option("spec", spec, "sweep spec JSON")->required();
    sw->add_option("--out", out, "CSV path (default stdout)");
    auto* val = app.add_subcommand("validate", "analytic results against simulation");
    add_scenario(val);
    add_solver(val);
    add_sim(val);

    CLI11_PARSE(app, argc, argv);

    try {
        Out o;
        if (gg->parsed()) {
            const SystemParameters p = scenario(scen, rho);
            const CycleStatistics c = cycle_moments(p);
            header(o, p);
            o.kv("esb", gg_mean_sojourn(p));
            o.kv("ed", gg_mean_delivery(p));
            o.kv("cycle_mean", c.mean_c);
            o.kv("cycle_second_moment", c.second_moment_c);
            o.kv("cycle_residual", c.mean_residual);
            o.kv("cycle_length_biased", c.mean_length_biased);
            emit(o, out);
        } else if (ex->parsed()) {
            const SystemParameters p = scenario(scen, rho);
            const FkSolution s = solve_fk(p, {grid, delta});
            const BoundedValue esb = exhaustive_mean_sojourn(p, s);
            const BoundedValue ed = exhaustive_mean_delivery(p, s);
            double fk_max = 0.0;
            for (double v : s.grid.values()) fk_max = std::max(fk_max, std::abs(v));
            const SolverReport& r = s.report;
            header(o, p);
            o.kv("el", expected_waiting_customers(p));
            o.kv("esb", esb.value);
            o.kv("esb_bound", esb.bound);
            o.kv("ed", ed.value);
            o.kv("ed_bound", ed.bound);
            o.kv("fk_max", fk_max);
            o.kv("grid", s.grid.n());
            o.kv("shift", r.shift_applied ? *r.shift_applied : 0.0);
            o.kv("riemann_sum", r.riemann_sum);
            o.kv("regularity_margin", r.regularity_margin);
            o.kv("iterations", r.iterations);
            o.kv("achieved_delta", r.achieved_delta);
            o.kv("epsilon", r.epsilon);
            o.kv("zeta", r.zeta);
            o.kv("error_bound_g", r.error_bound_g);
            o.kv("kernel", r.kernel);
            if (!grid_csv.empty()) write_grid_csv(p, s, grid_csv);
            emit(o, out);
        } else if (sim->parsed()) {
            SimulationConfig cfg(scenario(scen, rho));
            cfg.policy = parse_policy(policy);
            cfg.seed = seed;
            cfg.replications = reps;
            cfg.measured_batches = batches;
            cfg.warmup_batches = warmup;
            cfg.trace_path = trace;
            header(o, cfg.params);
            o.kv("policy", to_string(cfg.policy));
            for (const SimulationEstimate& e : simulate(cfg)) {
                o.kv(e.metric, e.mean);
                o.kv(e.metric + "_ci", e.ci_half_width);
            }
            o.kv("replications", reps);
            o.kv("total_batches", static_cast<double>(batches) * reps);
            emit(o, out);
        } else if (lim->parsed()) {
            const SystemParameters p = scenario(scen, rho);
            const Regime r = parse_regime(regime);
            o.kv("regime", to_string(r));
            for (const LimitReport& l : {gg_limits(p, r), exhaustive_limits(p, r)}) {
                const std::string pre = l.policy == Policy::GloballyGated ? "gg" : "exhaustive";
                o.kv(pre + ".scaling", l.scaling());
                o.kv(pre + ".sojourn", l.sojourn_limit);
                o.kv(pre + ".delivery", l.delivery_limit);
            }
            const PolicyGap g = policy_gap(p, r);
            o.kv("gap.sojourn", g.sojourn);
            o.kv("gap.delivery", g.delivery);
            emit(o, out);
        } else if (sw->parsed()) {
            const SweepSpec s = load_sweep_spec(spec);
            const std::string csv = sweep_csv(run_sweep(s, load_scenario(s.scenario_path)));
            if (out.empty()) {
                std::fputs(csv.c_str(), stdout);
            } else {
                std::ofstream f(out);
                if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + out);
                f << csv;
            }
        } else if (val->parsed()) {
            const SystemParameters p = scenario(scen, rho);
            ValidateOptions vo;
            vo.batches = batches;
            vo.replications = reps;
            vo.seed = seed;
            vo.grid = grid;
            vo.delta = delta;
            header(o, p);
            bool ok = true;
            for (const Check& c : validate_scenario(p, vo)) {
                o.line(fmt::format("{} {} analytic={:.9g} bound={:.9g} sim={:.9g} ci={:.9g} tol={:.9g}",
                                   c.pass ? "PASS" : "FAIL", c.name, c.analytic, c.bound, c.sim_mean,
                                   c.sim_ci, c.tolerance));
                ok = ok && c.pass;
            }
            o.kv("result", ok ? "pass" : "fail");
            emit(o, out);
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: kind=%s message=\"%s\"\n", to_string(e.kind()), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: kind=Internal message=\"%s\"\n", e.what());
        return 3;
    }
    return 0;
}
