#include <cmath>
#include <vector>

#include "doctest.h"
#include "sensornet/analytic.hpp"
#include "sensornet/errors.hpp"
#include "sensornet/special.hpp"

using namespace sensornet;

namespace {

// Exponential series summed term by term in plain doubles, no rescaling.
double naive_v_exponential(unsigned n, double r, double l, double lambda, double L) {
    r = std::min(r, L);
    double acc = 0.0;
    for (unsigned i = 0; i <= n && i * r < l; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const double p = std::exp(log_gamma_p(n, lambda * (l - i * r)));
        acc += sign * std::exp(log_binomial(n, i)) * std::exp(-lambda * i * r) * p;
    }
    return acc / std::pow(-std::expm1(-lambda * L), n);
}

double naive_p_exponential(unsigned n, double R, double L, double lambda) {
    return naive_v_exponential(n, R, L, lambda, L) / naive_v_exponential(n, L, L, lambda, L);
}

bool close(const ProbResult& p, double expected, double rel) {
    return std::fabs(p.value - expected) <= rel * std::fabs(expected) + p.abs_error;
}

}  // namespace

TEST_CASE("uniform distances") {
    // 40-digit reference values.
    CHECK(p_uniform(5, 300, 1000).value == doctest::Approx(0.26195).epsilon(1e-13));
    CHECK(p_uniform(30, 100, 1000).value == doctest::Approx(0.18118594312439181).epsilon(1e-12));
    CHECK(p_uniform(1, 300, 1000).value == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(p_uniform(4, 1000, 1000).value == 1.0);
    CHECK(v_uniform(3, 300, 1000, 1000).value() == doctest::Approx(0.027).epsilon(1e-13));
    CHECK(v_uniform(3, 300, 700, 1000).value() == doctest::Approx(0.025666666666666667).epsilon(1e-13));
    CHECK(p_uniform(5, 300, 1000).method == Method::uniform);
}

TEST_CASE("uniform reference formula") {
    CHECK(p_desai_manjunath(5, 300, 1000).value == doctest::Approx(0.38912).epsilon(1e-13));
}

TEST_CASE("constant segment") {
    CHECK(p_constant(10, 50, 1000, 10, 80).value == doctest::Approx(0.0037120986837328180).epsilon(1e-11));
    CHECK(p_constant(63, 50, 1000, 10, 80).value == doctest::Approx(0.95386382758896675).epsilon(1e-11));
    CHECK(p_constant(62, 50, 1000, 10, 80).value == doctest::Approx(0.93827147146959117).epsilon(1e-11));
    CHECK(v_constant(4, 50, 120, 10, 80).value() == doctest::Approx(0.05331112036651395).epsilon(1e-12));
    // Every distance is at least a: a * n >= L leaves no proper network.
    const ProbResult none = p_constant(101, 50, 1000, 10, 80);
    CHECK(none.value == 0.0);
    CHECK_FALSE(none.note.empty());
    CHECK(p_constant(10, 5, 1000, 10, 80).value == 0.0);   // a >= R
    CHECK(p_constant(10, 90, 1000, 10, 80).value == 1.0);  // R >= b
}

TEST_CASE("heterogeneous segments") {
    using CS = density_params::ConstantSegment;
    const std::vector<CS> three{{10, 80}, {20, 60}, {10, 80}};
    CHECK(p_heterogeneous(three, 50, 1000).value == doctest::Approx(0.24489795918367347).epsilon(1e-12));
    CHECK(v_heterogeneous(three, 50, 1000).value() == doctest::Approx(0.24489795918367347).epsilon(1e-12));
    const std::vector<CS> six{{10, 80}, {20, 60}, {10, 80}, {20, 60}, {10, 80}, {20, 60}};
    CHECK(p_heterogeneous(six, 50, 300).value == doctest::Approx(0.091210960094765091).epsilon(1e-11));
    // A single repeated segment matches the constant formula.
    const std::vector<CS> same(10, CS{10, 80});
    CHECK(p_heterogeneous(same, 50, 1000).value == doctest::Approx(0.0037120986837328180).epsilon(1e-11));
}

TEST_CASE("three-step density") {
    CHECK(p_three_step(5, 50, 1000, 0.9 / 50).value == doctest::Approx(0.7737809375).epsilon(1e-12));
    CHECK(p_three_step(44, 100, 1000, 0.009).value == doctest::Approx(0.95406563251923023).epsilon(1e-11));
    CHECK(p_three_step(43, 100, 1000, 0.009).value == doctest::Approx(0.94980074589886190).epsilon(1e-11));
    CHECK_THROWS_AS(p_three_step(5, 50, 1000, 0.03), DomainError);
    double C = 0.0;
    CHECK(match_three_step(Density::three_step(100, 0.009, 1000), 100, &C));
    CHECK(C == doctest::Approx(0.009));
    CHECK_FALSE(match_three_step(Density::constant(10, 80, 1000), 100));
}

TEST_CASE("general mixture agrees with the special cases") {
    const double L = 1000.0;
    const std::vector<Density> comps{Density::constant(10, 80, L), Density::constant(20, 60, L)};
    // Equal average of two segments versus the mixture written by hand.
    const ProbResult avg = p_average(6, 50, L, comps);
    std::vector<MixtureGroup> groups{{{{10, 80, 0.5 / 70}, {20, 60, 0.5 / 40}}, 6}};
    const double v_r = v_mixture(groups, 50, L).value();
    const double v_l = v_mixture(groups, L, L).value();
    CHECK(avg.value == doctest::Approx(v_r / v_l).epsilon(1e-12));
    CHECK(avg.method == Method::average);
    // Uniform as a one-segment mixture.
    std::vector<MixtureGroup> u{{{{0, L, 1.0 / L}}, 5}};
    CHECK(v_mixture(u, 300, L).value() / v_mixture(u, L, L).value() == doctest::Approx(0.26195).epsilon(1e-12));
    // Three-step as a two-segment mixture.
    std::vector<MixtureGroup> t{{{{0, 50, 0.9 / 50}, {25, 75, 0.1 / 50}}, 5}};
    CHECK(v_mixture(t, 50, L).value() / v_mixture(t, L, L).value() == doctest::Approx(0.7737809375).epsilon(1e-12));
}

TEST_CASE("exponential distances") {
    // 50-digit references, lambda = 0.01, L = 1000, n = 30.
    const ProbResult p100 = p_exponential(30, 100, 1000, 0.01);
    CHECK(p100.value == doctest::Approx(0.20180203341027615).epsilon(1e-11));
    const ProbResult p50 = p_exponential(30, 50, 1000, 0.01);
    CHECK(p50.value == doctest::Approx(2.8031531108212516e-6).epsilon(1e-9));
    CHECK(p50.abs_error < 1e-6);
    CHECK(close(p_exponential(30, 40, 1000, 0.01), 1.3903077644538382e-8, 1e-8));
    CHECK(close(p_exponential(30, 30, 1000, 0.01), 1.0196913445447821e-11, 1e-8));
    CHECK(p_exponential(30, 30, 1000, 0.01).extended);
}

TEST_CASE("naive exponential summation fails where the guarded one succeeds") {
    const double guarded = p_exponential(30, 30, 1000, 0.01).value;
    const double naive = naive_p_exponential(30, 30, 1000, 0.01);
    CHECK(std::fabs(guarded - 1.0196913445447821e-11) < 1e-18);
    CHECK(!(std::fabs(naive - 1.0196913445447821e-11) < 1e-6 * 1.0196913445447821e-11));
}

TEST_CASE("series are invariant under term order and extended retry agrees") {
    const SeriesValue a = v_uniform(30, 100, 1000, 1000, SeriesPrecision::extended_only);
    const SeriesValue b = v_uniform(30, 100, 1000, 1000);
    CHECK(a.value() == doctest::Approx(b.value()).epsilon(1e-12));
}

TEST_CASE("probability clamping") {
    const ProbResult ok = make_probability(1.0 + 1e-17, 1e-15, Method::uniform);
    CHECK(ok.value == 1.0);
    CHECK(ok.valid);
    const ProbResult bad = make_probability(-0.1, 1e-15, Method::uniform);
    CHECK(bad.value == 0.0);
    CHECK_FALSE(bad.valid);
}

TEST_CASE("model-level closed forms") {
    const double L = 1000.0;
    auto m = DeploymentModel::shared(L, 100, Density::uniform(L));
    CHECK(connectivity_closed_form(m, 30)->value == doctest::Approx(0.18118594312439181).epsilon(1e-12));
    CHECK(connectivity_closed_form(m.with_radius(L), 3)->value == 1.0);

    auto cov = DeploymentModel::shared(L, 300, Density::uniform(L));
    CHECK(coverage_closed_form(cov, 3)->value == doctest::Approx(0.008).epsilon(1e-12));
    auto unit = DeploymentModel::shared(1.0, 0.6, Density::uniform(1.0));
    CHECK(coverage_closed_form(unit, 1)->value == doctest::Approx(0.2).epsilon(1e-12));

    // Per-distance list reproduces the heterogeneous value.
    auto het = DeploymentModel::per_distance(
        L, 50, {Density::constant(10, 80, L), Density::constant(20, 60, L), Density::constant(10, 80, L)});
    CHECK(connectivity_closed_form(het, 3)->value == doctest::Approx(0.24489795918367347).epsilon(1e-12));

    // Normal distances have no closed form.
    auto nm = DeploymentModel::shared(L, 50, Density::normal(30, 10, L));
    CHECK_FALSE(connectivity_closed_form(nm, 3));
    // Eight links of at most R cannot reach past L - R.
    auto ts = DeploymentModel::shared(L, 100, Density::three_step(100, 0.009, L));
    CHECK(coverage_closed_form(ts, 8)->value == 0.0);
}
