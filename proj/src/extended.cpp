#include "sensornet/extended.hpp"

#include <cmath>
#include <limits>

namespace sensornet {

void ExtFloat::normalize() {
    if (m_.hi == 0.0 || !std::isfinite(m_.hi)) {
        if (m_.hi == 0.0) {
            m_ = {};
            e_ = 0;
        }
        return;
    }
    int k = 0;
    std::frexp(m_.hi, &k);
    m_.hi = std::ldexp(m_.hi, -k);
    m_.lo = std::ldexp(m_.lo, -k);
    e_ += k;
}

double ExtFloat::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(m_.hi + m_.lo)) + static_cast<double>(e_) * kLn2.hi;
}

double ExtFloat::to_double() const {
    if (is_zero()) return 0.0;
    if (e_ > 2000) return m_.hi > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
    if (e_ < -2000) return 0.0;
    return std::ldexp(m_.hi + m_.lo, static_cast<int>(e_));
}

DoubleDouble ExtFloat::scaled_to(std::int64_t reference_exponent) const {
    if (is_zero()) return {};
    const std::int64_t shift = e_ - reference_exponent;
    if (shift < -1100) return {};
    const int s = static_cast<int>(shift);
    return {std::ldexp(m_.hi, s), std::ldexp(m_.lo, s)};
}

ExtFloat pow(ExtFloat base, unsigned n) {
    ExtFloat result = ExtFloat::one();
    while (n != 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n != 0) base = base * base;
    }
    return result;
}

DoubleDouble exp_dd(DoubleDouble x) {
    // x = k ln2 + r, then exp(r) = (exp(r / 2^10))^(2^10).
    const double k = std::nearbyint(x.hi / kLn2.hi);
    DoubleDouble r = x - kLn2 * DoubleDouble(k);
    constexpr int squarings = 10;
    r = DoubleDouble(std::ldexp(r.hi, -squarings), std::ldexp(r.lo, -squarings));

    // Taylor series of exp(r) - 1; |r| < 3.4e-4 so 12 terms exceed 2^-106.
    DoubleDouble term = r;
    DoubleDouble sum = r;
    for (int i = 2; i <= 12; ++i) {
        term = term * r / DoubleDouble(static_cast<double>(i));
        sum += term;
    }
    // (1 + s)^2 - 1 = 2s + s^2 keeps the small quantity separate.
    for (int i = 0; i < squarings; ++i) sum = sum * DoubleDouble(2.0) + sum * sum;
    DoubleDouble result = sum + DoubleDouble(1.0);
    const int ik = static_cast<int>(k);
    return {std::ldexp(result.hi, ik), std::ldexp(result.lo, ik)};
}

ExtFloat ExtFloat::exp(DoubleDouble x) {
    const double k = std::nearbyint(x.hi / kLn2.hi);
    const DoubleDouble r = x - kLn2 * DoubleDouble(k);
    return ExtFloat(exp_dd(r), static_cast<std::int64_t>(k));
}

}  // namespace sensornet
