#include <cmath>
#include <vector>

#include "doctest.h"
#include "sensornet/analytic.hpp"
#include "sensornet/convolve.hpp"
#include "sensornet/errors.hpp"

using namespace sensornet;

namespace {

// Numerical value within its own error estimate (plus a small floor) of the exact one.
void check_against(const ProbResult& numeric, double exact) {
    CAPTURE(numeric.value);
    CAPTURE(numeric.abs_error);
    CHECK(std::fabs(numeric.value - exact) <= 3.0 * numeric.abs_error + 1e-9);
    CHECK(numeric.abs_error < 1e-4);
}

}  // namespace

TEST_CASE("connectivity matches closed forms") {
    const double L = 1000.0;
    check_against(p_numeric(DeploymentModel::shared(L, 300, Density::uniform(L)), 5, 2048).probability, 0.26195);
    check_against(p_numeric(DeploymentModel::shared(L, 50, Density::constant(10, 80, L)), 10, 2048).probability,
                  0.0037120986837328180);
    check_against(p_numeric(DeploymentModel::shared(L, 100, Density::exponential(0.01, L)), 30, 2048).probability,
                  0.20180203341027615);
    check_against(p_numeric(DeploymentModel::shared(L, 50, Density::three_step(50, 0.018, L)), 5, 2048).probability,
                  0.7737809375);
    auto het = DeploymentModel::per_distance(
        L, 50, {Density::constant(10, 80, L), Density::constant(20, 60, L), Density::constant(10, 80, L)});
    check_against(p_numeric(het, 3, 2048).probability, 0.24489795918367347);
}

TEST_CASE("coverage matches closed forms") {
    check_against(coverage_numeric(DeploymentModel::shared(1000, 300, Density::uniform(1000)), 3, 2048).probability,
                  0.008);
    check_against(coverage_numeric(DeploymentModel::shared(1.0, 0.6, Density::uniform(1.0)), 1, 256).probability, 0.2);
}

TEST_CASE("v_numeric") {
    const double L = 1000.0;
    const std::vector<Density> u(3, Density::uniform(L));
    const NumericValue v = v_numeric(u, 300, 1000, 2048);
    CHECK(std::fabs(v.value - 0.027) < 1e-9);
    CHECK(v_numeric(u, 0.0, 10.0, 128).value == 0.0);
    CHECK(v_numeric(std::vector<Density>{}, 5.0, 10.0, 128).value == 1.0);
    CHECK_THROWS_AS(v_numeric(u, 300, 1000, 16), DomainError);
}

TEST_CASE("curves agree with single evaluations") {
    const double L = 1000.0;
    auto m = DeploymentModel::shared(L, 80, Density::normal(40, 15, L));
    const auto curve = connectivity_curve_numeric(m, 6, 1024);
    REQUIRE(curve.size() == 6);
    for (unsigned n = 1; n <= 6; ++n) {
        const auto single = p_numeric(m, n, 1024).probability;
        CHECK(curve[n - 1].value == doctest::Approx(single.value).epsilon(1e-14));
    }
    const auto cov = coverage_curve_numeric(m, 6, 1024);
    for (unsigned n = 1; n <= 6; ++n) CHECK(cov[n - 1].value <= curve[n - 1].value + 1e-12);
}

TEST_CASE("serial and parallel backends agree") {
    const double L = 1000.0;
    auto m = DeploymentModel::shared(L, 120, Density::exponential(0.02, L));
    const auto s = p_numeric(m, 7, 1024, Backend::serial);
    const auto p = p_numeric(m, 7, 1024, Backend::parallel);
    CHECK(s.fine == p.fine);
    CHECK(s.coarse == p.coarse);
}

TEST_CASE("degenerate models are reported") {
    const double L = 1000.0;
    // 101 distances of at least 10 cannot fit in 1000.
    auto m = DeploymentModel::shared(L, 50, Density::constant(10, 80, L));
    CHECK_THROWS_AS(p_numeric(m, 101, 512), DegenerateModelError);
    const auto curve = connectivity_curve_numeric(m, 101, 512);
    CHECK(curve.front().valid);
    CHECK_FALSE(curve.back().valid);
}

TEST_CASE("radius beyond L") {
    auto m = DeploymentModel::shared(100, 200, Density::uniform(100));
    CHECK(p_numeric(m, 4, 128).probability.value == 1.0);
}
