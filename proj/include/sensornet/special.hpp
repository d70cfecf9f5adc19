#pragma once

// Scalar kernels shared by the closed-form probability formulas:
// log-binomials, the standard normal CDF and quantile, the regularized
// incomplete gamma function, signed log-domain values and the summation
// of alternating series with an automatic extended-precision retry.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sensornet/extended.hpp"

namespace sensornet {

/// ln C(n, k). Relative error <= 1e-12 for n <= 1e6. Throws DomainError if k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Standard normal CDF.
double phi(double x);

/// Standard normal quantile; throws DomainError unless 0 < p < 1.
double phi_inverse(double p);

/// Phi(b) - Phi(a) for a <= b, evaluated on the tail that avoids cancellation.
double phi_interval(double a, double b);

/// ln P(n, x), P the lower regularized incomplete gamma function
/// P(n, x) = 1 - e^-x sum_{j<n} x^j / j!. Series for x < n + 1,
/// continued fraction otherwise. Returns -inf for x <= 0.
double log_gamma_p(unsigned n, double x);

/// P(n, x) in extended precision (series for x < n, complement otherwise).
ExtFloat gamma_p_ext(unsigned n, DoubleDouble x);

/// Kahan-Neumaier running sum.
struct CompensatedAccumulator {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + compensation; }
};

/// A real number stored as sign * exp(log_magnitude). sign == 0 is zero.
///
/// `weight` tracks the total magnitude of the logarithms combined to build
/// the value; the relative error of exp(log_magnitude) is a few eps * weight.
struct SignedLogValue {
    int sign = 0;
    double log_magnitude = -std::numeric_limits<double>::infinity();
    double weight = 0.0;

    static SignedLogValue zero() { return {}; }
    static SignedLogValue one() { return {1, 0.0, 0.0}; }
    static SignedLogValue from(double x);
    static SignedLogValue from(DoubleDouble x) { return from(x.hi + x.lo); }
    static SignedLogValue exp(DoubleDouble x) {
        const double v = x.hi + x.lo;
        return {1, v, std::fabs(v) + 1.0};
    }

    bool is_zero() const { return sign == 0; }
    double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
    double log_abs() const { return log_magnitude; }
    double error_weight() const { return weight + 1.0; }

    friend SignedLogValue operator*(const SignedLogValue& x, const SignedLogValue& y) {
        if (x.sign == 0 || y.sign == 0) return {};
        return {x.sign * y.sign, x.log_magnitude + y.log_magnitude, x.weight + y.weight};
    }
    friend SignedLogValue operator/(const SignedLogValue& x, const SignedLogValue& y) {
        if (x.sign == 0) return {};
        return {x.sign * y.sign, x.log_magnitude - y.log_magnitude, x.weight + y.weight};
    }
    friend SignedLogValue operator-(const SignedLogValue& x) {
        return {-x.sign, x.log_magnitude, x.weight};
    }
    friend SignedLogValue pow(const SignedLogValue& x, unsigned n) {
        if (n == 0) return one();
        if (x.sign == 0) return {};
        const double l = n * x.log_magnitude;
        return {(n % 2 == 0) ? 1 : x.sign, l, n * x.weight + std::fabs(l)};
    }
};

/// P(n, x) as a signed-log value (exact zero for x <= 0).
SignedLogValue gamma_p_log_value(unsigned n, double x);

/// Factorials 0!..n! in a given representation.
template <class Num>
class FactorialTable {
public:
    explicit FactorialTable(unsigned n);
    const Num& factorial(unsigned k) const { return table_[k]; }
    Num binomial(unsigned n, unsigned k) const {
        return table_[n] / (table_[k] * table_[n - k]);
    }
    unsigned size() const { return static_cast<unsigned>(table_.size()); }

private:
    std::vector<Num> table_;
};

template <>
FactorialTable<SignedLogValue>::FactorialTable(unsigned n);
template <>
FactorialTable<ExtFloat>::FactorialTable(unsigned n);

/// Sum of a series held as value = mantissa * exp(log_scale).
/// abs_error is in mantissa units.
struct SeriesValue {
    double mantissa = 0.0;
    double log_scale = 0.0;
    double abs_error = 0.0;
    double max_term = 0.0;  // largest |term| in mantissa units
    std::size_t terms = 0;
    bool extended = false;

    static SeriesValue exact_zero() { return {}; }
    double value() const { return mantissa == 0.0 ? 0.0 : mantissa * std::exp(log_scale); }
    double abs_error_value() const { return abs_error == 0.0 ? 0.0 : abs_error * std::exp(log_scale); }
    /// Mantissa and error re-expressed on another log scale.
    SeriesValue rescaled(double new_log_scale) const;
};

/// a - b with errors added.
SeriesValue difference(const SeriesValue& a, const SeriesValue& b);

struct Ratio {
    double value = 0.0;
    double abs_error = 0.0;
};

/// a / b with first-order error propagation. b must be nonzero.
Ratio ratio(const SeriesValue& a, const SeriesValue& b);

/// Sorts terms by magnitude and adds them with Neumaier compensation.
/// The result is independent of the input order.
SeriesValue sum_series(std::span<const SignedLogValue> terms);
SeriesValue sum_series(std::span<const ExtFloat> terms);

struct SumResult {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Sum of signed-log terms in ordinary representation, with its error bound.
SumResult alternating_sum(std::span<const SignedLogValue> terms);

enum class SeriesPrecision { automatic, double_only, extended_only };

/// True when a double-precision series sum has cancelled too far to trust:
/// |sum| < 1e-9 * max|term| or the estimated relative error exceeds 1e-11.
bool needs_extended(const SeriesValue& s);

/// Evaluates a series whose terms are produced by `emit(std::vector<Num>&)`
/// for Num = SignedLogValue and, on cancellation, Num = ExtFloat.
template <class Emit>
SeriesValue evaluate_series(Emit&& emit, SeriesPrecision precision = SeriesPrecision::automatic) {
    if (precision != SeriesPrecision::extended_only) {
        std::vector<SignedLogValue> terms;
        emit(terms);
        SeriesValue s = sum_series(terms);
        if (precision == SeriesPrecision::double_only || !needs_extended(s)) return s;
    }
    std::vector<ExtFloat> terms;
    emit(terms);
    return sum_series(terms);
}

}  // namespace sensornet
