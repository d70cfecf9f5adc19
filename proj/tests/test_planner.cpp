#include <cmath>
#include <vector>

#include "doctest.h"
#include "sensornet/analytic.hpp"
#include "sensornet/errors.hpp"
#include "sensornet/planner.hpp"

using namespace sensornet;

namespace {

std::function<ProbResult(unsigned)> from_list(std::vector<double> values) {
    return [values](unsigned n) { return make_probability(values.at(n - 1), 0.0, Method::numeric); };
}

std::vector<unsigned> table(const std::function<Density(double)>& density, std::vector<double> radii) {
    TableRequest req;
    req.density = density;
    req.radii = std::move(radii);
    std::vector<unsigned> out;
    for (const PlanRow& row : generate_table(req)) out.push_back(row.n_min.value_or(0));
    return out;
}

}  // namespace

TEST_CASE("first upward crossing") {
    CHECK(first_crossing(from_list({0.2, 0.5, 0.96, 0.97}), 0.95, 4, 1.0) == 3u);
    // Starts above the target and never drops: one sensor suffices.
    CHECK(first_crossing(from_list({0.99, 0.98, 0.97}), 0.95, 3, 1.0) == 1u);
    // Dips below and comes back up.
    CHECK(first_crossing(from_list({0.99, 0.9, 0.96}), 0.95, 3, 1.0) == 3u);
    // Never reaches the target.
    CHECK_FALSE(first_crossing(from_list({0.1, 0.2, 0.3}), 0.95, 3, 1.0));
    // Coverage convention: P_0 = 0 so a first value above p is a crossing at 1.
    CHECK(first_crossing(from_list({0.97, 0.5}), 0.95, 2, 0.0) == 1u);
    // Invalid probabilities stop the scan.
    auto bad = [](unsigned) {
        ProbResult r = make_probability(0.0, 0.0, Method::numeric);
        r.valid = false;
        return r;
    };
    CHECK_THROWS_AS(first_crossing(bad, 0.95, 3, 1.0), PrecisionError);
}

TEST_CASE("reference table rows") {
    const double L = 1000.0;
    CHECK(table([&](double) { return Density::uniform(L); }, {200, 100, 50, 25, 10}) ==
          std::vector<unsigned>{29, 69, 157, 349, 982});
    CHECK(table([&](double R) { return Density::constant(0.2 * R, 1.6 * R, L); }, {200, 150, 100, 50, 25}) ==
          std::vector<unsigned>{14, 19, 30, 63, 132});
    CHECK(table([&](double R) { return Density::constant(0.4 * R, 1.4 * R, L); }, {200, 150, 100, 50, 25}) ==
          std::vector<unsigned>{10, 13, 20, 41, 83});
    CHECK(table([&](double R) { return Density::constant(0.6 * R, 1.2 * R, L); }, {200, 150, 100, 50, 25}) ==
          std::vector<unsigned>{8, 10, 15, 30, 61});
    CHECK(table([&](double R) { return Density::three_step(R, 0.9 / R, L); }, {250, 200, 150, 100, 50}) ==
          std::vector<unsigned>{12, 17, 25, 44, 105});
}

TEST_CASE("table rows carry the crossing and estimates") {
    TableRequest req;
    req.density = [](double R) { return Density::constant(0.2 * R, 1.6 * R, 1000); };
    req.radii = {50};
    const auto rows = generate_table(req);
    REQUIRE(rows.size() == 1);
    const PlanRow& r = rows.front();
    CHECK(r.n_min == 63u);
    CHECK(r.p_at_min == doctest::Approx(0.95386382758896675).epsilon(1e-11));
    CHECK(r.p_before_min == doctest::Approx(0.93827147146959117).epsilon(1e-11));
    CHECK(r.n_max == 100);  // ceil(1000 / 10)
    REQUIRE(r.n_estimate);
    CHECK(*r.n_estimate == 93);  // 1 + (L - b)/a, a sufficient count
}

TEST_CASE("cross-checked rows agree") {
    TableRequest req;
    req.density = [](double R) { return Density::three_step(R, 0.9 / R, 1000); };
    req.radii = {200};
    req.cross_check = true;
    const auto rows = generate_table(req);
    CHECK(rows.front().n_min == 17u);
    CHECK_FALSE(rows.front().disputed);
}

TEST_CASE("coverage minimum") {
    // Exact curve: C_24 < 0.9 <= C_25 = 0.90269846878...
    const auto m = DeploymentModel::shared(1000, 200, Density::uniform(1000));
    CHECK(min_sensors_coverage(m, 0.9) == 25u);
    EngineOptions numeric{Engine::numeric, 1024};
    CHECK(coverage_probability(m, 25, numeric).value == doctest::Approx(0.9026984687833585).epsilon(1e-4));
}

TEST_CASE("engine selection and fallback") {
    const auto m = DeploymentModel::shared(1000, 80, Density::normal(40, 15, 1000));
    std::string warning;
    const ProbResult p = connectivity_probability(m, 5, {Engine::closed_form, 1024}, &warning);
    CHECK(p.method == Method::numeric);
    CHECK_FALSE(warning.empty());
    const auto u = DeploymentModel::shared(1000, 300, Density::uniform(1000));
    CHECK(connectivity_probability(u, 5).method == Method::uniform);
    CHECK(connectivity_probability(u, 5, {Engine::numeric, 1024}).method == Method::numeric);
    const auto curve = connectivity_curve(u, 5);
    CHECK(curve.back().value == doctest::Approx(0.26195).epsilon(1e-12));
}

TEST_CASE("numeric minimum matches closed form") {
    const auto m = DeploymentModel::shared(1000, 200, Density::constant(40, 320, 1000));
    CHECK(min_sensors_exact(m, 0.95, 0, {Engine::numeric, 1024}) == 14u);
}

TEST_CASE("effective radius and caps") {
    CHECK(effective_radius(5, 3) == doctest::Approx(4.0));
    CHECK(effective_radius(5, 0) == 5.0);
    CHECK_THROWS_AS(effective_radius(5, 5), DomainError);
    CHECK_THROWS_AS(effective_radius(5, -1), DomainError);
    CHECK(default_cap(DeploymentModel::shared(1000, 30, Density::uniform(1000))) == 334u);
}
