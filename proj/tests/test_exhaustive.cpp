#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "oracle_values.hpp"
#include "polling/error.hpp"
#include "polling/exhaustive.hpp"
#include "polling/scenario.hpp"

using namespace polling;
using doctest::Approx;

namespace {

double dist(double x, double y) { return arc_length(x, y); }

SystemParameters lin_sp3(double rho) {
    return SystemParameters(0.1, 1.0, BatchSize::shifted_poisson(3.0), ServiceTime::deterministic(1.0),
                            fixtures::linear())
        .with_rho(rho);
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("mean waiting customers") {
    CHECK(expected_waiting_customers(fixtures::s0()) == Approx(oracle::el_s0).epsilon(1e-14));
    CHECK(expected_waiting_customers(fixtures::k2()) == Approx(oracle::el_k2).epsilon(1e-14));
    CHECK(expected_waiting_customers(warehouse_template(0.6)) == Approx(oracle::el_warehouse_06).epsilon(1e-12));
    CHECK(expected_waiting_customers(fixtures::s0().with_lambda(0.0)) == 0.0);
    CHECK(expected_waiting_customers(fixtures::s0().with_location(fixtures::ramp())) ==
          expected_waiting_customers(fixtures::s0()));
}

TEST_CASE("generated waiting kernels") {
    const SystemParameters p = fixtures::s0();
    CHECK(generated_wait_service(p, 0.2, 0.7) == Approx(oracle::ws_s0_02_07).epsilon(1e-13));
    CHECK(generated_wait_service(p, 0.5, 0.5) == Approx(1.0));
    CHECK(generated_wait_service(p, 0.5 - 1e-12, 0.5) == Approx(1.0));
    CHECK(generated_wait_residual(p, 0.3, 0.3) == Approx(0.5));
    CHECK(generated_wait_travel(p, 0.0, 0.5) == Approx(oracle::wt_s0_0_05).epsilon(1e-10));
    CHECK(generated_wait_travel(p, 0.4, 0.4) == 0.0);
    const SystemParameters idle = p.with_lambda(0.0);
    CHECK(generated_wait_travel(idle, 0.7, 0.2) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("generated delivery kernels") {
    const SystemParameters p = fixtures::s0();
    CHECK(generated_delivery_service(p, 0.5, 0.8) == Approx(oracle::ds_s0_05_08).epsilon(1e-13));
    CHECK(generated_delivery_service(p, 0.5, 0.2) == Approx(oracle::ds_s0_05_02).epsilon(1e-13));
    CHECK(generated_delivery_service(p, 1.0 - 1e-12, 0.2) == Approx(std::exp(0.5)).epsilon(1e-9));
    CHECK(generated_delivery_travel(p, 0.0, 0.6) == Approx(oracle::dt_s0_0_y).epsilon(1e-10));
    const SystemParameters idle = p.with_lambda(0.0);
    CHECK(generated_delivery_travel(idle, 0.3, 0.6) == Approx(0.7).epsilon(1e-12));
    CHECK(generated_delivery_travel(idle, 0.6, 0.3) == Approx(1.4).epsilon(1e-12));
}

TEST_CASE("partial spread closed forms") {
    CHECK(partial_spread(fixtures::s0(), 0.2, 0.7).total() == Approx(oracle::ps_s0_02_07).epsilon(1e-13));
    const SystemParameters r = fixtures::s0().with_location(fixtures::ramp());
    CHECK(partial_spread(r, 0.5, 0.8).total() == Approx(oracle::ps_2x_05_08).epsilon(1e-13));
    const PartialSpread z = partial_spread(fixtures::s0().with_lambda(0.0), 0.2, 0.7);
    CHECK(z.f_alpha == 0.0);
    CHECK(z.f_br == 0.0);
}

TEST_CASE("single-customer batches have no f_K component") {
    const FkSolution s = solve_fk(fixtures::s0(), {64, 1e-9, 1000});
    CHECK(s.report.iterations == 1);
    for (double v : s.grid.values()) CHECK(v == 0.0);
    CHECK(spread(fixtures::s0(), s, 0.2, 0.7) == Approx(partial_spread(fixtures::s0(), 0.2, 0.7).total()));
}

TEST_CASE("uniform density with K = 2 reproduces the linear closed form") {
    const SystemParameters p = fixtures::k2();
    const FkSolution s = solve_fk(p, {256, 1e-9, 100000});
    double err = 0.0;
    const int n = s.grid.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = s.grid.node(i), y = s.grid.node(j);
            const double fk = s.grid.pi_node(i) * s.grid.g(i, j) / p.server_density(y);
            err = std::max(err, std::abs(fk - dist(x, y)));
        }
    CHECK(err <= s.report.error_bound_g);
    CHECK(s.report.achieved_delta <= 1e-9);
    CHECK(s.report.regularity_margin >= 0.0);
    CHECK_FALSE(s.report.shift_applied.has_value());
}

TEST_CASE("iterate differences obey the contraction envelope") {
    for (const auto& d : {LocationDensity::uniform(), fixtures::linear(), fixtures::classes()}) {
        const SystemParameters p = fixtures::k2().with_location(d).with_rho(0.9);
        const FkSolution s = solve_fk(p, {128, 1e-9, 100000});
        const auto& h = s.report.history;
        REQUIRE(h.size() >= 4);
        const double sup = p.location().sup();
        for (int m = 4; m <= static_cast<int>(h.size()); ++m) {
            const auto& r = h[static_cast<std::size_t>(m - 1)];
            CHECK(r.max_diff <= s.report.envelope(p, m));
            CHECK(r.max_weighted_diff <= s.report.envelope(p, m) / sup);
        }
    }
}

TEST_CASE("grid iterates are finite and nonnegative") {
    const FkSolution s = solve_fk(lin_sp3(0.6), {64, 1e-9, 100000});
    for (double v : s.grid.values()) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    CHECK(s.report.error_bound_g >= 0.0);
}

TEST_CASE("fixed-point residual stays within twice the certified bound") {
    for (double rho : {0.3, 0.6, 0.9})
        for (const auto& d : {LocationDensity::uniform(), fixtures::linear(), fixtures::classes()}) {
            const SystemParameters p = fixtures::k2().with_location(d).with_rho(rho);
            const FkSolution s = solve_fk(p, {64, 1e-10, 100000});
            const ResidualReport r = spread_residual(p, s);
            CHECK(r.max_ratio <= 2.0);
        }
}

TEST_CASE("mass identity") {
    CHECK(spread_mass_closed_form(lin_sp3(0.3)) == Approx(oracle::mass_lin_sp3_0_3).epsilon(1e-12));
    CHECK(spread_mass_closed_form(lin_sp3(0.6)) == Approx(oracle::mass_lin_sp3_0_6).epsilon(1e-12));
    CHECK(spread_mass_closed_form(fixtures::k2()) == Approx(oracle::mass_k2).epsilon(1e-12));
    for (double rho : {0.3, 0.6}) {
        const SystemParameters p = lin_sp3(rho);
        const FkSolution s = solve_fk(p);
        const BoundedValue m = spread_mass(p, s);
        CHECK(std::abs(m.value - spread_mass_closed_form(p)) <= m.bound + 1e-6);
    }
}

TEST_CASE("coupling with the uniform solution") {
    const SystemParameters p = fixtures::k2().with_location(fixtures::linear());
    const FkSolution s = solve_fk(p);
    const double rho = p.rho();
    const double kappa = p.batch().factorial2() / p.batch().mean();
    for (int a = 0; a < 32; ++a)
        for (int b = 0; b < 32; ++b) {
            const double x = (a + 0.5) / 32, y = (b + 0.25) / 32;
            if (a == b) continue;
            const LocationDensity& pi = p.location();
            const double lhs = p.server_density(y) * fk_value(p, s, x, y) / pi.pdf(x);
            // Uniform f_K at the transformed points is rho/(1-rho) * kappa * d.
            const double fu = rho / (1.0 - rho) * kappa * dist(pi.cdf(x), pi.cdf(y));
            CHECK(std::abs(lhs - pi.pdf(y) * fu) <= (1.0 + rho) * pi.pdf(y) * rho * kappa);
        }
}

TEST_CASE("light-traffic spread") {
    for (const auto& d : {LocationDensity::uniform(), fixtures::linear()}) {
        const SystemParameters p(1e-6, 1.0, BatchSize::deterministic(2), ServiceTime::deterministic(1.0), d);
        const FkSolution s = solve_fk(p, {128, 1e-14, 1000});
        for (double x : {0.1, 0.35, 0.8})
            for (double y : {0.05, 0.6, 0.9}) {
                const double px = d.pdf(x), py = d.pdf(y), dd = dist(x, y);
                const double expect = px * dd + 1.0 * px * py * dd;
                CHECK(spread(p, s, x, y) / 2e-6 == Approx(expect).epsilon(1e-3));
            }
    }
}

TEST_CASE("mean sojourn and delivery against direct evaluations") {
    struct Case {
        SystemParameters p;
        double esb, ed;
    };
    const std::vector<Case> cases{
        {fixtures::s0(), oracle::ex_s0_esb, oracle::ex_s0_ed},
        {fixtures::s0().with_location(fixtures::linear()), oracle::ex_lin_k1_esb, oracle::ex_lin_k1_ed},
        {fixtures::k2(), oracle::ex_k2_esb, oracle::ex_k2_ed},
    };
    for (const auto& c : cases) {
        const FkSolution s = solve_fk(c.p);
        const BoundedValue esb = exhaustive_mean_sojourn(c.p, s), ed = exhaustive_mean_delivery(c.p, s);
        CHECK(std::abs(esb.value - c.esb) <= esb.bound + 1e-7);
        CHECK(std::abs(ed.value - c.ed) <= ed.bound + 1e-7);
        CHECK(ed.value >= esb.value);
    }
}

TEST_CASE("light and heavy traffic of the exhaustive means") {
    const SystemParameters lo = fixtures::s0().with_rho(1e-6);
    const FkSolution s = solve_fk(lo);
    CHECK(exhaustive_mean_sojourn(lo, s).value == Approx(1.5).epsilon(1e-4));
    CHECK(exhaustive_mean_delivery(lo, s).value == Approx(2.0).epsilon(1e-4));
    const SystemParameters hi = fixtures::s0().with_rho(0.95);
    const FkSolution t = solve_fk(hi);
    CHECK(0.05 * exhaustive_mean_sojourn(hi, t).value == Approx(1.0).epsilon(0.05));
    CHECK(0.05 * exhaustive_mean_delivery(hi, t).value == Approx(2.0).epsilon(0.05));
}

TEST_CASE("delivery dominates sojourn across scenarios") {
    for (double rho : {0.2, 0.5, 0.8}) {
        for (const auto& p : {fixtures::k2().with_rho(rho), lin_sp3(rho), fixtures::mixed(rho)}) {
            const FkSolution s = solve_fk(p, {128, 1e-9, 100000});
            CHECK(exhaustive_mean_delivery(p, s).value >= exhaustive_mean_sojourn(p, s).value);
        }
    }
}

TEST_CASE("solver errors") {
    const SystemParameters p = fixtures::k2();
    const FkSolution s = solve_fk(p, {32, 1e-9, 100000});
    CHECK(kind_of([&] { spread(p.with_rho(0.4), s, 0.1, 0.2); }) == ErrorKind::GridMismatch);
    CHECK(kind_of([&] { exhaustive_mean_sojourn(fixtures::s0(), s); }) == ErrorKind::GridMismatch);
    CHECK(kind_of([&] { solve_fk(p, {8, 1e-9, 10}); }) == ErrorKind::InvalidParameters);
    CHECK(kind_of([&] { solve_fk(p, {32, 0.0, 10}); }) == ErrorKind::InvalidParameters);
    const SystemParameters gap = p.with_location(fixtures::window(0.2, 0.5));
    CHECK(kind_of([&] { solve_fk(gap, {32, 1e-9, 100000}); }) == ErrorKind::NonPositiveDensity);
    const SystemParameters floored = p.with_location(fixtures::window(0.2, 0.5).with_floor(1e-8));
    const FkSolution f = solve_fk(floored, {32, 1e-9, 100000});
    CHECK(f.report.iterations > 0);
}

TEST_CASE("spread vanishes where the density vanishes") {
    // The closed-form parts carry a pi(x) factor; f_K does through the transformation.
    const SystemParameters p = fixtures::k2().with_location(fixtures::window(0.2, 0.5).with_floor(1e-8));
    const FkSolution s = solve_fk(p, {64, 1e-9, 100000});
    CHECK(std::abs(spread(p, s, 0.7, 0.3)) < 1e-6);
}
