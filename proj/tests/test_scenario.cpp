#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polling/error.hpp"
#include "polling/scenario.hpp"

using namespace polling;

namespace {

const char* kScenario = R"({"lambda": 0.5, "alpha": 1,
    "batch": {"kind": "deterministic", "k": 1},
    "service": {"kind": "deterministic", "b": 1},
    "location": {"kind": "uniform"}})";

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Unstable;
}

}  // namespace

TEST_CASE("sweep spec parsing") {
    const SweepSpec s = parse_sweep_spec(R"({"scenario": "s0.json", "values": [0.2, 0.4],
        "policies": ["gg", "exhaustive"], "outputs": ["sojourn", "delivery"]})", "/data");
    CHECK(s.scenario_path == "/data/s0.json");
    CHECK(s.values.size() == 2);
    CHECK(s.policies.size() == 2);
    CHECK_FALSE(s.simulate);
    CHECK(kind_of([] { parse_sweep_spec(R"({"scenario": "a", "values": [0.4, 0.2]})"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { parse_sweep_spec(R"({"scenario": "a", "values": []})"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { parse_sweep_spec(R"({"scenario": "a", "values": [0.5, 1.0]})"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { parse_sweep_spec(R"({"scenario": "a", "values": [0.5], "sweep": "alpha"})"); }) ==
          ErrorKind::InvalidConfig);
}

TEST_CASE("sweep rows and CSV") {
    SweepSpec s = parse_sweep_spec(R"({"scenario": "x", "values": [0.2, 0.6],
        "policies": ["gg", "exhaustive"], "outputs": ["sojourn", "waiting"], "grid": 64})");
    const auto rows = run_sweep(s, parse_scenario(kScenario));
    // GG has no analytic waiting count, so it contributes only sojourn rows.
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].rho == doctest::Approx(0.2));
    CHECK(rows[0].policy == Policy::GloballyGated);
    CHECK(rows[1].policy == Policy::Exhaustive);
    CHECK(rows[1].metric == SweepOutput::Sojourn);
    CHECK(rows[2].metric == SweepOutput::Waiting);
    CHECK(rows[3].rho == doctest::Approx(0.6));
    const std::string csv = sweep_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "rho,policy,metric,value,bound,sim_mean,sim_ci");
    std::getline(in, line);
    CHECK(line.rfind("0.2,globally_gated,sojourn,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",,");
}

TEST_CASE("scenario files") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "polling_scenario_test.json";
    std::ofstream(path) << kScenario;
    CHECK(load_scenario(path.string()).rho() == 0.5);
    std::filesystem::remove(path);
    CHECK(kind_of([&] { load_scenario((dir / "does_not_exist.json").string()); }) == ErrorKind::MalformedScenario);
}
