#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sensornet/errors.hpp"
#include "sensornet/special.hpp"

using namespace sensornet;

namespace {

// Exact binomial in 128-bit integers (n <= 120 keeps every product in range).
unsigned __int128 exact_binomial(unsigned n, unsigned k) {
    unsigned __int128 c = 1;
    for (unsigned j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

}  // namespace

TEST_CASE("log_binomial small values") {
    CHECK(log_binomial(5, 0) == 0.0);
    CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
    CHECK_THROWS_AS(log_binomial(3, 4), DomainError);
    CHECK_THROWS_AS(log_binomial(-1, 0), DomainError);
}

TEST_CASE("log_binomial matches exact integers") {
    // C(157, 10) = 1871392332785690
    const double exact = static_cast<double>(exact_binomial(157, 10));
    CHECK(exact == 1871392332785690.0);
    CHECK(std::fabs(std::exp(log_binomial(157, 10)) / exact - 1.0) < 1e-12);
    for (unsigned n = 0; n <= 60; ++n)
        for (unsigned k = 0; k <= n; ++k) {
            const double e = static_cast<double>(exact_binomial(n, k));
            CHECK(std::fabs(std::exp(log_binomial(n, k)) / e - 1.0) < 1e-12);
        }
}

TEST_CASE("log_binomial relative accuracy for large n") {
    // ln C(10^6, 500000) by Stirling-free reference: lgamma in long double.
    const long double ref = std::lgamma(1000001.0L) - 2.0L * std::lgamma(500001.0L);
    CHECK(std::fabs(log_binomial(1000000, 500000) / static_cast<double>(ref) - 1.0) < 1e-12);
}

TEST_CASE("phi values and symmetry") {
    CHECK(phi(0.0) == 0.5);
    CHECK(std::fabs((1.0 - phi(4.0)) - 3.16712418331199e-5) < 1e-12);
    CHECK(std::fabs(phi(-4.0) - 3.167124183311992e-5) < 1e-18);
    double prev = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        CHECK(std::fabs(phi(x) + phi(-x) - 1.0) < 1e-12);
        CHECK(phi(x) >= prev);
        prev = phi(x);
    }
}

TEST_CASE("phi_inverse") {
    CHECK(phi_inverse(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    // 50-digit reference: 2.807033768343804
    CHECK(std::fabs(phi_inverse(0.9975) - 2.807033768343804) < 1e-12);
    for (double p : {0.001, 0.05, 0.95, 0.9999, 1e-10, 0.3})
        CHECK(std::fabs(phi(phi_inverse(p)) - p) < 1e-10);
    CHECK_THROWS_AS(phi_inverse(0.0), DomainError);
    CHECK_THROWS_AS(phi_inverse(1.0), DomainError);
}

TEST_CASE("phi_interval uses the accurate tail") {
    CHECK(phi_interval(6.0, 7.0) == doctest::Approx(phi(-6.0) - phi(-7.0)).epsilon(1e-13));
    CHECK(phi_interval(1.0, 1.0) == 0.0);
}

TEST_CASE("incomplete gamma") {
    // P(1, x) = 1 - e^-x
    for (double x : {1e-3, 0.5, 2.0, 30.0})
        CHECK(std::exp(log_gamma_p(1, x)) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
    // P(30, 10) = 2.509951201527907823e-7
    const double p = std::exp(log_gamma_p(30, 10.0));
    CHECK(p == doctest::Approx(2.509951201527908e-7).epsilon(1e-12));
    const ExtFloat pe = gamma_p_ext(30, DoubleDouble(10.0));
    CHECK(pe.to_double() == doctest::Approx(p).epsilon(1e-12));
    const ExtFloat big = gamma_p_ext(5, DoubleDouble(40.0));
    // 1 - P(5, 40) = 5.020464318829133e-13
    CHECK(std::fabs(big.to_double() - 0.9999999999994980) < 1e-16);
    CHECK(gamma_p_log_value(3, 0.0).is_zero());
}

TEST_CASE("signed log values round trip") {
    for (double x : {1.0, -2.5, 1e-300, 3e300, -7.25e-12}) {
        const SignedLogValue v = SignedLogValue::from(x);
        CHECK(std::fabs(v.to_double() / x - 1.0) < 1e-12);
    }
    CHECK(SignedLogValue::from(0.0).is_zero());
    const SignedLogValue a = SignedLogValue::from(-3.0);
    const SignedLogValue b = SignedLogValue::from(4.0);
    CHECK((a * b).to_double() == doctest::Approx(-12.0));
    CHECK((a / b).to_double() == doctest::Approx(-0.75));
    CHECK(pow(a, 3).to_double() == doctest::Approx(-27.0));
}

TEST_CASE("compensated accumulator") {
    CompensatedAccumulator acc;
    acc.add(1.0);
    acc.add(1e-16);
    acc.add(-1.0);
    CHECK(acc.total() == doctest::Approx(1e-16).epsilon(1e-12));
}

TEST_CASE("alternating_sum basics") {
    std::vector<SignedLogValue> t{SignedLogValue::one(), -SignedLogValue::one()};
    CHECK(alternating_sum(t).value == 0.0);
    std::vector<SignedLogValue> one{SignedLogValue::one()};
    CHECK(alternating_sum(one).value == 1.0);
    // P_2 for uniform distances with R = L/2: 1 - 2 (1/2)^2 = 0.5
    std::vector<SignedLogValue> p2{SignedLogValue::one(), -(SignedLogValue::from(2.0) * SignedLogValue::from(0.25))};
    CHECK(alternating_sum(p2).value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("alternating_sum is permutation invariant") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::vector<SignedLogValue> terms;
    for (int i = 0; i < 200; ++i) terms.push_back({i % 2 ? -1 : 1, u(gen), 1.0});
    const SumResult ref = alternating_sum(terms);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(terms.begin(), terms.end(), gen);
        const SumResult s = alternating_sum(terms);
        CHECK(std::fabs(s.value - ref.value) <= ref.abs_error + s.abs_error);
    }
}

TEST_CASE("series falls back to extended precision on cancellation") {
    // sum_i (-1)^i C(40, i) (1 - i/40)^40 = 40!/40^40, heavily cancelling.
    auto emit = [](auto& out) {
        using Num = typename std::decay_t<decltype(out)>::value_type;
        FactorialTable<Num> f(40);
        for (unsigned i = 0; i < 40; ++i) {
            const Num t = f.binomial(40, i) * pow(Num::from(DoubleDouble(1.0) - DoubleDouble(i) / DoubleDouble(40.0)), 40);
            out.push_back(i % 2 ? -t : t);
        }
    };
    const double exact = std::exp(std::lgamma(41.0) - 40.0 * std::log(40.0));
    const SeriesValue d = evaluate_series(emit, SeriesPrecision::double_only);
    const SeriesValue a = evaluate_series(emit);
    CHECK(needs_extended(d));
    CHECK(a.extended);
    // About 21 of the 32 double-double digits cancel.
    CHECK(std::fabs(a.value() - exact) <= a.abs_error_value());
    CHECK(a.abs_error_value() < 1e-8 * exact);
    CHECK(std::fabs(d.value() - exact) > 1e-6 * exact);
}
