#include <cmath>

#include "doctest.h"
#include "sensornet/extended.hpp"

using namespace sensornet;

TEST_CASE("double-double keeps the low word") {
    const DoubleDouble x = DoubleDouble(1.0) + DoubleDouble(1e-20);
    CHECK(x.hi == 1.0);
    CHECK(x.lo == doctest::Approx(1e-20));
    const DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
    const DoubleDouble back = third * DoubleDouble(3.0) - DoubleDouble(1.0);
    CHECK(std::fabs(back.hi) < 1e-31);
}

TEST_CASE("two_prod is exact") {
    const double a = 1.0 + std::ldexp(1.0, -30);
    const DoubleDouble p = dd::two_prod(a, a);
    // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60
    CHECK(p.hi == 1.0 + std::ldexp(1.0, -29));
    CHECK(p.lo == std::ldexp(1.0, -60));
}

TEST_CASE("exp_dd accuracy") {
    // e = 2.718281828459045235360287471352662...
    const DoubleDouble e = exp_dd(DoubleDouble(1.0));
    CHECK(e.hi == 2.718281828459045);
    CHECK(std::fabs((e - DoubleDouble(2.718281828459045, 1.4456468917292502e-16)).hi) < 1e-30);
    // exp(-10) = 4.539992976248485153559151556055061e-5
    const DoubleDouble m = exp_dd(DoubleDouble(-10.0));
    CHECK(std::fabs(m.hi / 4.539992976248485e-5 - 1.0) < 1e-15);
}

TEST_CASE("ExtFloat range and arithmetic") {
    const ExtFloat big = pow(ExtFloat(1000.0), 400);  // 1e1200
    CHECK(big.log_abs() == doctest::Approx(1200.0 * std::log(10.0)).epsilon(1e-14));
    const ExtFloat q = big / pow(ExtFloat(10.0), 1199);
    CHECK(q.to_double() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK((-q).sign() == -1);
    CHECK(ExtFloat::zero().is_zero());
    CHECK(ExtFloat::exp(DoubleDouble(-2000.0)).log_abs() == doctest::Approx(-2000.0).epsilon(1e-14));
}
