#include <doctest.h>

#include <cmath>
#include <vector>

#include "common.hpp"
#include "oracle_values.hpp"
#include "polling/gg.hpp"

using namespace polling;
using doctest::Approx;

TEST_CASE("cycle moments on S0") {
    const CycleStatistics c = cycle_moments(fixtures::s0());
    CHECK(c.mean_c == Approx(oracle::s0_ec).epsilon(1e-14));
    CHECK(c.second_moment_c == Approx(oracle::s0_ec2).epsilon(1e-14));
    CHECK(c.mean_residual == Approx(oracle::s0_ecr).epsilon(1e-14));
    CHECK(c.mean_length_biased == Approx(oracle::s0_ecstar).epsilon(1e-14));
}

TEST_CASE("cycle moments with K = 2") {
    const CycleStatistics c = cycle_moments(fixtures::k2());
    CHECK(c.mean_c == Approx(2.0).epsilon(1e-14));
    CHECK(c.second_moment_c == Approx(oracle::k2_ec2).epsilon(1e-14));
}

TEST_CASE("zero load gives a constant cycle") {
    const SystemParameters p = fixtures::s0().with_lambda(0.0);
    const CycleStatistics c = cycle_moments(p);
    CHECK(c.mean_c == 1.0);
    CHECK(c.second_moment_c == Approx(1.0));
    CHECK(c.mean_residual == Approx(0.5));
    CHECK(delta_sequence(p, 0.7) == std::vector<double>{0.7, 0.0});
    CHECK(cycle_lst(p, 0.7) == Approx(std::exp(-0.7)).epsilon(1e-15));
    CHECK(gg_mean_delivery(p) == Approx(2.5));
    CHECK(gg_mean_sojourn(p) == Approx(2.0));
}

TEST_CASE("delta sequence") {
    CHECK(delta_sequence(fixtures::s0(), 0.0) == std::vector<double>{0.0});
    const auto d = delta_sequence(fixtures::s0(), 1.0, 1e-12);
    REQUIRE(d.size() > 2);
    CHECK(d.back() < 1e-12);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] <= 0.5 * d[i - 1] * (1 + 1e-15));
}

TEST_CASE("cycle transform values") {
    const SystemParameters p = fixtures::s0();
    CHECK(cycle_lst(p, 0.0) == 1.0);
    CHECK(cycle_lst(p, 0.1) == Approx(oracle::s0_phi_c_0_1).epsilon(1e-13));
    CHECK(cycle_lst(p, 0.5) == Approx(oracle::s0_phi_c_0_5).epsilon(1e-13));
    CHECK(cycle_lst(p, 1.0) == Approx(oracle::s0_phi_c_1_0).epsilon(1e-13));
    const LstEvaluation e = cycle_lst_eval(p, 0.5);
    CHECK(e.tolerance >= 0.0);
    CHECK(e.tolerance < 1e-12);
    const double h = 1e-6;
    CHECK(-(cycle_lst(p, h) - 1.0) / h == Approx(2.0).epsilon(1e-5));
}

TEST_CASE("closed-form means on S0") {
    const SystemParameters p = fixtures::s0();
    CHECK(gg_mean_sojourn(p) == Approx(oracle::s0_esb).epsilon(1e-12));
    CHECK(gg_mean_delivery(p) == Approx(oracle::s0_ed).epsilon(1e-12));
    // The delivery surplus decomposes into the extra travel plus the late-batch term.
    const CycleStatistics c = cycle_moments(p);
    const double surplus = p.alpha() * pgf_of_cdf_integral(p) + p.rho() * c.mean_length_biased * p.batch().mean_inv_k1();
    CHECK(gg_mean_delivery(p) - gg_mean_sojourn(p) == Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(surplus == Approx(7.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("transforms on S0 and a linear density") {
    const SystemParameters p = fixtures::s0();
    CHECK(gg_delivery_lst(p, 0.25) == Approx(oracle::s0_phi_d_0_25).epsilon(1e-10));
    CHECK(gg_sojourn_lst(p, 0.25) == Approx(oracle::s0_phi_s_0_25).epsilon(1e-9));
    const SystemParameters q(0.25, 1.0, BatchSize::deterministic(2), ServiceTime::deterministic(1.0), fixtures::linear());
    CHECK(pgf_of_cdf_integral(q) == Approx(oracle::lin_k2_int_k_pi).epsilon(1e-12));
    CHECK(gg_mean_sojourn(q) == Approx(oracle::lin_k2_esb).epsilon(1e-12));
    CHECK(gg_sojourn_lst(q, 0.25) == Approx(oracle::lin_k2_phi_s_0_25).epsilon(1e-9));
}

TEST_CASE("light-load delivery transform") {
    const SystemParameters p = fixtures::s0().with_lambda(1e-6);
    const double w = 0.4, a = p.alpha();
    const double expect = p.service().lst(w) * std::exp(-w * a) * (1.0 - std::exp(-w * a)) / (w * a);
    CHECK(gg_delivery_lst(p, w) == Approx(expect).epsilon(1e-5));
}

TEST_CASE("transforms are normalized, bounded and nonincreasing") {
    const std::vector<SystemParameters> ps{fixtures::s0(), fixtures::k2().with_location(fixtures::linear()),
                                           fixtures::mixed()};
    for (const auto& p : ps) {
        CHECK(gg_delivery_lst(p, 0.0) == 1.0);
        CHECK(gg_sojourn_lst(p, 0.0) == 1.0);
        double prev_d = 1.0, prev_s = 1.0, prev_c = 1.0;
        const double scale = 1.0 / gg_mean_delivery(p);
        for (int i = 1; i <= 20; ++i) {
            const double w = 0.25 * i * scale;
            const double d = gg_delivery_lst(p, w), s = gg_sojourn_lst(p, w), c = cycle_lst(p, w);
            CHECK(d > 0.0);
            CHECK(d <= prev_d);
            CHECK(s > 0.0);
            CHECK(s <= prev_s);
            CHECK(c <= prev_c);
            prev_d = d;
            prev_s = s;
            prev_c = c;
        }
    }
}

TEST_CASE("transform derivatives at zero match the closed-form means") {
    for (const auto& p : {fixtures::s0(), fixtures::k2().with_location(fixtures::classes())}) {
        const double h = 1e-5;
        CHECK(-(gg_delivery_lst(p, h) - 1.0) / h == Approx(gg_mean_delivery(p)).epsilon(1e-4));
        CHECK(-(gg_sojourn_lst(p, h) - 1.0) / h == Approx(gg_mean_sojourn(p)).epsilon(1e-4));
    }
}

TEST_CASE("mean delivery does not depend on the location density") {
    const SystemParameters base = fixtures::s0();
    const double ref = gg_mean_delivery(base);
    for (const auto& d : {fixtures::linear(), fixtures::ramp(), fixtures::classes(), fixtures::window(0.99, 1.0)})
        CHECK(gg_mean_delivery(base.with_location(d)) == ref);
    CHECK(ref == Approx(14.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("mass just after the depot minimizes the sojourn time") {
    const SystemParameters base = fixtures::k2();
    double prev = INFINITY;
    for (double c : {0.9, 0.5, 0.1, 0.01}) {
        const double v = gg_mean_sojourn(base.with_location(fixtures::window(c, c + 0.01)));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("delivery dominates sojourn") {
    for (double rho : {0.05, 0.3, 0.6, 0.9, 0.99})
        for (const auto& d : {LocationDensity::uniform(), fixtures::linear(), fixtures::classes()}) {
            const SystemParameters p = fixtures::k2().with_location(d).with_rho(rho);
            CHECK(gg_mean_delivery(p) >= gg_mean_sojourn(p));
        }
}
