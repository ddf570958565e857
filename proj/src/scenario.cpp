#include "polling/scenario.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/gg.hpp"
#include "polling/parallel.hpp"
#include "polling/simulator.hpp"

namespace polling {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw Error(ErrorKind::MalformedScenario, msg); }

const json& field(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) malformed(fmt::format("{}: missing field '{}'", where, key));
    return j.at(key);
}

double number(const json& j, const char* key, const char* where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) malformed(fmt::format("{}: field '{}' must be a number", where, key));
    return v.get<double>();
}

std::string kind_of(const json& j, const char* where) {
    const json& v = field(j, "kind", where);
    if (!v.is_string()) malformed(fmt::format("{}: 'kind' must be a string", where));
    return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const char* what) {
    if (!v.is_array()) malformed(fmt::format("{} must be an array of numbers", what));
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) malformed(fmt::format("{} must be an array of numbers", what));
        out.push_back(e.get<double>());
    }
    return out;
}

BatchSize parse_batch(const json& j) {
    const std::string kind = kind_of(j, "batch");
    if (kind == "deterministic") {
        const json& k = field(j, "k", "batch");
        if (!k.is_number_integer()) malformed("batch: 'k' must be an integer");
        return BatchSize::deterministic(k.get<int>());
    }
    if (kind == "pmf") return BatchSize::pmf(numbers(field(j, "p", "batch"), "batch.p"));
    if (kind == "shifted_poisson") return BatchSize::shifted_poisson(number(j, "mean", "batch"));
    malformed("batch: unknown kind '" + kind + "'");
}

ServiceTime parse_service(const json& j) {
    const std::string kind = kind_of(j, "service");
    if (kind == "deterministic") return ServiceTime::deterministic(number(j, "b", "service"));
    if (kind == "exponential") {
        if (j.contains("rate")) return ServiceTime::exponential(number(j, "rate", "service"));
        const double m = number(j, "mean", "service");
        if (!(m > 0.0)) throw Error(ErrorKind::InvalidParameters, "service mean must be positive");
        return ServiceTime::exponential(1.0 / m);
    }
    if (kind == "moments")
        return ServiceTime::moments(number(j, "mean", "service"), number(j, "second_moment", "service"));
    malformed("service: unknown kind '" + kind + "'");
}

LocationDensity parse_location(const json& j) {
    const std::string kind = kind_of(j, "location");
    LocationDensity loc = LocationDensity::uniform();
    if (kind == "uniform") {
    } else if (kind == "piecewise") {
        const json& segs = field(j, "segments", "location");
        if (!segs.is_array() || segs.empty()) malformed("location: 'segments' must be a nonempty array");
        std::vector<Segment> out;
        for (const json& s : segs) {
            Segment seg;
            seg.start = number(s, "start", "location.segments");
            const std::vector<double> c = numbers(field(s, "coeffs", "location.segments"), "coeffs");
            if (c.empty() || c.size() > 4) malformed("location.segments: 1 to 4 coefficients expected");
            std::copy(c.begin(), c.end(), seg.coeffs.begin());
            out.push_back(seg);
        }
        bool normalize = false;
        if (j.contains("normalize")) {
            if (!j["normalize"].is_boolean()) malformed("location: 'normalize' must be a boolean");
            normalize = j["normalize"].get<bool>();
        }
        loc = LocationDensity::piecewise(std::move(out), normalize);
    } else if (kind == "piecewise_uniform") {
        loc = LocationDensity::piecewise_uniform(numbers(field(j, "breaks", "location"), "breaks"),
                                                 numbers(field(j, "masses", "location"), "masses"));
    } else {
        malformed("location: unknown kind '" + kind + "'");
    }
    if (j.contains("floor")) loc = loc.with_floor(number(j, "floor", "location"));
    return loc;
}

std::string read_file(const std::string& path, ErrorKind kind) {
    std::ifstream in(path);
    if (!in) throw Error(kind, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

SystemParameters parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) malformed("scenario must be a JSON object");
    const double alpha = number(j, "alpha", "scenario");
    BatchSize batch = parse_batch(field(j, "batch", "scenario"));
    ServiceTime service = parse_service(field(j, "service", "scenario"));
    LocationDensity loc = parse_location(field(j, "location", "scenario"));
    const bool has_l = j.contains("lambda"), has_r = j.contains("rho");
    if (has_l == has_r) malformed("scenario: give exactly one of 'lambda' and 'rho'");
    const double lambda = has_l ? number(j, "lambda", "scenario")
                                : number(j, "rho", "scenario") / (batch.mean() * service.mean());
    return SystemParameters(lambda, alpha, std::move(batch), std::move(service), std::move(loc));
}

SystemParameters load_scenario(const std::string& path) {
    return parse_scenario(read_file(path, ErrorKind::MalformedScenario));
}

SystemParameters warehouse_template(double rho) {
    const BatchSize k = BatchSize::shifted_poisson(15.0);
    const ServiceTime b = ServiceTime::exponential(0.2);
    return SystemParameters(rho / (k.mean() * b.mean()), 600.0, k, b,
                            LocationDensity::piecewise_uniform({0.0, 0.2, 0.5}, {0.5, 0.3, 0.2}));
}

std::string to_string(SweepOutput o) {
    switch (o) {
        case SweepOutput::Sojourn: return "sojourn";
        case SweepOutput::Delivery: return "delivery";
        case SweepOutput::Waiting: return "waiting";
    }
    return "";
}

SweepSpec parse_sweep_spec(const std::string& json_text, const std::string& base_dir) {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, "sweep spec: " + m); };
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    SweepSpec s;
    try {
        std::filesystem::path sp = j.at("scenario").get<std::string>();
        if (sp.is_relative()) sp = std::filesystem::path(base_dir) / sp;
        s.scenario_path = sp.string();
        s.variable = j.value("sweep", std::string("rho_via_lambda"));
        s.values = j.at("values").get<std::vector<double>>();
        for (const auto& p : j.value("policies", std::vector<std::string>{"globally_gated", "exhaustive"}))
            s.policies.push_back(parse_policy(p));
        for (const auto& o : j.value("outputs", std::vector<std::string>{"sojourn", "delivery"})) {
            if (o == "sojourn") s.outputs.push_back(SweepOutput::Sojourn);
            else if (o == "delivery") s.outputs.push_back(SweepOutput::Delivery);
            else if (o == "waiting") s.outputs.push_back(SweepOutput::Waiting);
            else bad("unknown output '" + o + "'");
        }
        if (j.contains("simulate")) {
            const json& sim = j["simulate"];
            if (sim.is_boolean()) {
                s.simulate = sim.get<bool>();
            } else {
                s.simulate = true;
                s.sim_batches = sim.value("batches", s.sim_batches);
                s.sim_replications = sim.value("replications", s.sim_replications);
                s.sim_seed = sim.value("seed", s.sim_seed);
            }
        }
        s.grid = j.value("grid", s.grid);
        s.delta = j.value("delta", s.delta);
    } catch (const json::exception& e) {
        bad(e.what());
    }
    if (s.variable != "rho_via_lambda") bad("unsupported sweep variable '" + s.variable + "'");
    if (s.values.empty()) bad("grid of values is empty");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!(s.values[i] > 0.0 && s.values[i] < 1.0)) bad("every rho must lie in (0, 1)");
        if (i > 0 && !(s.values[i] > s.values[i - 1])) bad("values must be strictly increasing");
    }
    if (s.policies.empty() || s.outputs.empty()) bad("policies and outputs must be nonempty");
    return s;
}

SweepSpec load_sweep_spec(const std::string& path) {
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_sweep_spec(read_file(path, ErrorKind::InvalidConfig), dir.empty() ? "." : dir);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SystemParameters& base) {
    const std::size_t np = spec.policies.size();
    std::vector<std::vector<SweepRow>> cells(spec.values.size() * np);
    parallel_for(static_cast<int>(cells.size()), [&](int c) {
        const double rho = spec.values[static_cast<std::size_t>(c) / np];
        const Policy pol = spec.policies[static_cast<std::size_t>(c) % np];
        const SystemParameters p = base.with_rho(rho);
        std::vector<SimulationEstimate> sim;
        if (spec.simulate) {
            SimulationConfig cfg{p};
            cfg.policy = pol;
            cfg.measured_batches = spec.sim_batches;
            cfg.replications = spec.sim_replications;
            cfg.seed = spec.sim_seed;
            sim = simulate(cfg);
        }
        std::optional<FkSolution> fk;
        if (pol == Policy::Exhaustive) fk = solve_fk(p, {spec.grid, spec.delta});
        for (SweepOutput o : spec.outputs) {
            SweepRow row;
            row.rho = rho;
            row.policy = pol;
            row.metric = o;
            if (pol == Policy::GloballyGated) {
                if (o == SweepOutput::Waiting) continue;
                row.value = o == SweepOutput::Sojourn ? gg_mean_sojourn(p) : gg_mean_delivery(p);
            } else {
                BoundedValue v{expected_waiting_customers(p), 0.0};
                if (o == SweepOutput::Sojourn) v = exhaustive_mean_sojourn(p, *fk);
                if (o == SweepOutput::Delivery) v = exhaustive_mean_delivery(p, *fk);
                row.value = v.value;
                row.bound = v.bound;
            }
            if (spec.simulate) {
                const SimulationEstimate& e = estimate(sim, to_string(o));
                row.has_sim = true;
                row.sim_mean = e.mean;
                row.sim_ci = e.ci_half_width;
            }
            cells[static_cast<std::size_t>(c)].push_back(row);
        }
    });
    std::vector<SweepRow> rows;
    for (const auto& c : cells) rows.insert(rows.end(), c.begin(), c.end());
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "rho,policy,metric,value,bound,sim_mean,sim_ci\n";
    for (const SweepRow& r : rows) {
        out += fmt::format("{:.9g},{},{},{:.9g},{:.9g},", r.rho, to_string(r.policy), to_string(r.metric),
                           r.value, r.bound);
        if (r.has_sim) out += fmt::format("{:.9g},{:.9g}", r.sim_mean, r.sim_ci);
        else out += ",";
        out += "\n";
    }
    return out;
}

}  // namespace polling
