#pragma once

// Double-double arithmetic (about 106 significand bits) and ExtFloat, a
// double-double mantissa with an unbounded binary exponent. Used to
// re-evaluate alternating series whose double-precision sum cancels.

#include <cmath>
#include <cstdint>

namespace sensornet {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd {

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
#if defined(__FMA__) || defined(__aarch64__)
    return {p, std::fma(a, b, -p)};
#else
    // Dekker splitting; exact barring overflow.
    constexpr double split = 134217729.0;  // 2^27 + 1
    const double ta = split * a;
    const double ahi = ta - (ta - a);
    const double alo = a - ahi;
    const double tb = split * b;
    const double bhi = tb - (tb - b);
    const double blo = b - bhi;
    return {p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo};
#endif
}

}  // namespace dd

inline DoubleDouble operator-(DoubleDouble x) { return {-x.hi, -x.lo}; }

inline DoubleDouble operator+(DoubleDouble x, DoubleDouble y) {
    DoubleDouble s = dd::two_sum(x.hi, y.hi);
    const DoubleDouble t = dd::two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = dd::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble x, DoubleDouble y) { return x + (-y); }

inline DoubleDouble operator*(DoubleDouble x, DoubleDouble y) {
    DoubleDouble p = dd::two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return dd::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble x, DoubleDouble y) {
    const double q1 = x.hi / y.hi;
    DoubleDouble r = x - y * DoubleDouble(q1);
    const double q2 = r.hi / y.hi;
    r = r - y * DoubleDouble(q2);
    const double q3 = r.hi / y.hi;
    return DoubleDouble(dd::quick_two_sum(q1, q2)) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& x, DoubleDouble y) { return x = x + y; }

inline bool operator<(DoubleDouble x, DoubleDouble y) {
    return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo);
}

inline DoubleDouble abs(DoubleDouble x) { return x.hi < 0.0 ? -x : x; }

/// ln 2 to double-double precision.
inline constexpr DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

/// Value m * 2^e with 0.5 <= |m.hi| < 1, or exactly zero (m = 0, e = 0).
class ExtFloat {
public:
    constexpr ExtFloat() = default;
    explicit ExtFloat(DoubleDouble m, std::int64_t e = 0) : m_(m), e_(e) { normalize(); }
    explicit ExtFloat(double x) : ExtFloat(DoubleDouble(x)) {}

    static ExtFloat zero() { return ExtFloat(); }
    static ExtFloat one() { return ExtFloat(1.0); }
    static ExtFloat from(double x) { return ExtFloat(x); }
    static ExtFloat from(DoubleDouble x) { return ExtFloat(x); }
    /// e^x for a double-double exponent.
    static ExtFloat exp(DoubleDouble x);

    int sign() const { return m_.hi > 0.0 ? 1 : (m_.hi < 0.0 ? -1 : 0); }
    bool is_zero() const { return m_.hi == 0.0; }
    DoubleDouble mantissa() const { return m_; }
    std::int64_t exponent() const { return e_; }

    /// Natural log of |x|, double precision; -inf for zero.
    double log_abs() const;
    /// Nearest double (may overflow to +-inf or flush to 0).
    double to_double() const;
    /// Mantissa rescaled by 2^(e - reference_exponent), as a double-double.
    DoubleDouble scaled_to(std::int64_t reference_exponent) const;

    friend ExtFloat operator*(const ExtFloat& x, const ExtFloat& y) {
        return ExtFloat(x.m_ * y.m_, x.e_ + y.e_);
    }
    friend ExtFloat operator/(const ExtFloat& x, const ExtFloat& y) {
        return ExtFloat(x.m_ / y.m_, x.e_ - y.e_);
    }
    friend ExtFloat operator-(const ExtFloat& x) {
        ExtFloat r = x;
        r.m_ = -r.m_;
        return r;
    }
    friend ExtFloat pow(ExtFloat base, unsigned n);

    /// Error weight used by the series summation; extended terms are
    /// accurate to a few units of 2^-104 regardless of how they were built.
    double error_weight() const { return 1.0; }

private:
    void normalize();

    DoubleDouble m_{};
    std::int64_t e_ = 0;
};

/// e^x in double-double precision for moderate |x| (|x| < 700).
DoubleDouble exp_dd(DoubleDouble x);

}  // namespace sensornet
