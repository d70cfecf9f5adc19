#include "sensornet/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sensornet/errors.hpp"

namespace sensornet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) throw DomainError("log_binomial: need 0 <= k <= n");
    const std::int64_t m = std::min(k, n - k);
    if (m == 0) return 0.0;
    if (m <= (std::int64_t{1} << 20)) {
        // ln C(n, m) = sum_j log1p((n - m) / j); every summand is positive.
        CompensatedAccumulator acc;
        const double rest = static_cast<double>(n - m);
        for (std::int64_t j = 1; j <= m; ++j) acc.add(std::log1p(rest / static_cast<double>(j)));
        return acc.total();
    }
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double phi_interval(double a, double b) {
    if (b <= a) return 0.0;
    if (b <= 0.0) return phi(b) - phi(a);
    if (a >= 0.0) return phi(-a) - phi(-b);
    return 1.0 - phi(a) - phi(-b);
}

namespace {

// Rational approximation of the lower-tail quantile (relative error ~1e-9),
// for 0 < p <= 0.5.
double quantile_initial(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double phi_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("phi_inverse: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // Work in the lower tail where phi has full relative accuracy; 1 - p is
    // exact for p >= 0.5.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    double x = quantile_initial(target);
    for (int step = 0; step < 2; ++step) {
        const double e = phi(x) - target;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);  // Halley
    }
    return upper ? -x : x;
}

double log_gamma_p(unsigned n, double x) {
    if (n == 0) return 0.0;
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    const double a = static_cast<double>(n);
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 100000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * kEps) break;
        }
        return std::log(sum) + log_prefactor;
    }
    // Lentz continued fraction for Q(n, x).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    const double q = std::exp(log_prefactor) * h;
    return std::log1p(-q);
}

SignedLogValue gamma_p_log_value(unsigned n, double x) {
    if (n == 0) return SignedLogValue::one();
    if (!(x > 0.0)) return SignedLogValue::zero();
    const double lp = log_gamma_p(n, x);
    const double a = static_cast<double>(n);
    return {1, lp, x + a * std::fabs(std::log(x)) + std::lgamma(a) + std::fabs(lp) + 1.0};
}

namespace {

ExtFloat factorial_ext(unsigned n) {
    ExtFloat f = ExtFloat::one();
    for (unsigned k = 2; k <= n; ++k) f = f * ExtFloat(static_cast<double>(k));
    return f;
}

}  // namespace

ExtFloat gamma_p_ext(unsigned n, DoubleDouble x) {
    if (n == 0) return ExtFloat::one();
    if (!(x.hi > 0.0)) return ExtFloat::zero();
    const double a = static_cast<double>(n);
    if (x.hi < a) {
        // P = e^-x x^n / n! * sum_j x^j / ((n+1)...(n+j)); terms decrease.
        DoubleDouble term(1.0);
        DoubleDouble sum(1.0);
        for (unsigned j = 1; j < 1000000; ++j) {
            term = term * x / DoubleDouble(a + j);
            sum += term;
            if (term.hi < 1e-34 * sum.hi) break;
        }
        return ExtFloat(sum) * ExtFloat::exp(-x) * pow(ExtFloat(x), n) / factorial_ext(n);
    }
    // Q = e^-x x^(n-1)/(n-1)! * sum_i prod_{t<i} (n-1-t)/x; factors <= 1.
    DoubleDouble term(1.0);
    DoubleDouble sum(1.0);
    for (unsigned i = 1; i < n; ++i) {
        term = term * DoubleDouble(static_cast<double>(n - i)) / x;
        sum += term;
        if (term.hi < 1e-34 * sum.hi) break;
    }
    const ExtFloat q = ExtFloat(sum) * ExtFloat::exp(-x) * pow(ExtFloat(x), n - 1) /
                       factorial_ext(n - 1);
    const DoubleDouble qd = q.scaled_to(0);
    return ExtFloat(DoubleDouble(1.0) - qd);
}

SignedLogValue SignedLogValue::from(double x) {
    if (x == 0.0) return {};
    const double l = std::log(std::fabs(x));
    return {x > 0.0 ? 1 : -1, l, std::fabs(l) + 1.0};
}

template <>
FactorialTable<SignedLogValue>::FactorialTable(unsigned n) {
    table_.reserve(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
        const double l = std::lgamma(static_cast<double>(k) + 1.0);
        table_.push_back({1, l, l + 1.0});
    }
}

template <>
FactorialTable<ExtFloat>::FactorialTable(unsigned n) {
    table_.reserve(n + 1);
    ExtFloat f = ExtFloat::one();
    table_.push_back(f);
    for (unsigned k = 1; k <= n; ++k) {
        f = f * ExtFloat(static_cast<double>(k));
        table_.push_back(f);
    }
}

SeriesValue SeriesValue::rescaled(double new_log_scale) const {
    if (mantissa == 0.0 && abs_error == 0.0) {
        SeriesValue r = *this;
        r.log_scale = new_log_scale;
        return r;
    }
    const double f = std::exp(log_scale - new_log_scale);
    SeriesValue r = *this;
    r.mantissa *= f;
    r.abs_error *= f;
    r.max_term *= f;
    r.log_scale = new_log_scale;
    return r;
}

namespace {

bool is_empty(const SeriesValue& s) { return s.mantissa == 0.0 && s.abs_error == 0.0; }

}  // namespace

SeriesValue difference(const SeriesValue& a, const SeriesValue& b) {
    if (is_empty(b)) return a;
    if (is_empty(a)) {
        SeriesValue r = b;
        r.mantissa = -r.mantissa;
        return r;
    }
    const double scale = std::max(a.log_scale, b.log_scale);
    const SeriesValue x = a.rescaled(scale);
    const SeriesValue y = b.rescaled(scale);
    SeriesValue r;
    r.log_scale = scale;
    r.mantissa = x.mantissa - y.mantissa;
    r.abs_error = x.abs_error + y.abs_error + kEps * std::fabs(r.mantissa);
    r.max_term = std::max(x.max_term, y.max_term);
    r.terms = a.terms + b.terms;
    r.extended = a.extended || b.extended;
    return r;
}

Ratio ratio(const SeriesValue& a, const SeriesValue& b) {
    const double bm = std::fabs(b.mantissa);
    const double f = std::exp(a.log_scale - b.log_scale);
    Ratio r;
    r.value = a.mantissa / b.mantissa * f;
    r.abs_error = (a.abs_error + std::fabs(a.mantissa) * b.abs_error / bm) / bm * f +
                  kEps * std::fabs(r.value);
    return r;
}

SeriesValue sum_series(std::span<const SignedLogValue> terms) {
    SeriesValue out;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
        if (t.sign != 0) top = std::max(top, t.log_magnitude);
    if (top == -std::numeric_limits<double>::infinity()) return out;

    struct Scaled {
        double magnitude;
        double value;
    };
    std::vector<Scaled> scaled;
    scaled.reserve(terms.size());
    double term_error = 0.0;
    double abs_sum = 0.0;
    for (const auto& t : terms) {
        if (t.sign == 0) continue;
        const double m = std::exp(t.log_magnitude - top);
        scaled.push_back({m, t.sign * m});
        term_error += m * (2.0 * t.error_weight() + 2.0) * kEps;
        abs_sum += m;
    }
    std::sort(scaled.begin(), scaled.end(), [](const Scaled& x, const Scaled& y) {
        return x.magnitude < y.magnitude || (x.magnitude == y.magnitude && x.value < y.value);
    });
    CompensatedAccumulator acc;
    for (const auto& s : scaled) acc.add(s.value);

    out.mantissa = acc.total();
    out.log_scale = top;
    out.max_term = 1.0;
    out.terms = scaled.size();
    const double n = static_cast<double>(scaled.size());
    out.abs_error = term_error + 2.0 * kEps * std::fabs(out.mantissa) + n * kEps * kEps * abs_sum;
    return out;
}

SeriesValue sum_series(std::span<const ExtFloat> terms) {
    SeriesValue out;
    out.extended = true;
    bool any = false;
    std::int64_t top = 0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        top = any ? std::max(top, t.exponent()) : t.exponent();
        any = true;
    }
    if (!any) return out;

    std::vector<DoubleDouble> scaled;
    scaled.reserve(terms.size());
    double abs_sum = 0.0;
    double largest = 0.0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        const DoubleDouble s = t.scaled_to(top);
        scaled.push_back(s);
        abs_sum += std::fabs(s.hi);
        largest = std::max(largest, std::fabs(s.hi));
    }
    std::sort(scaled.begin(), scaled.end(), [](DoubleDouble x, DoubleDouble y) {
        const DoubleDouble ax = abs(x);
        const DoubleDouble ay = abs(y);
        return ax < ay || (!(ay < ax) && x < y);
    });
    DoubleDouble acc;
    for (const auto& s : scaled) acc += s;

    out.mantissa = acc.hi + acc.lo;
    out.log_scale = static_cast<double>(top) * kLn2.hi;
    out.max_term = largest;
    out.terms = scaled.size();
    // Terms carry ~1e-30 relative error; each double-double addition ~2^-104.
    out.abs_error = abs_sum * 1e-29 + kEps * std::fabs(out.mantissa);
    return out;
}

SumResult alternating_sum(std::span<const SignedLogValue> terms) {
    const SeriesValue s = sum_series(terms);
    return {s.value(), s.abs_error_value()};
}

bool needs_extended(const SeriesValue& s) {
    if (s.terms == 0 || s.extended) return false;
    const double m = std::fabs(s.mantissa);
    if (m < 1e-9 * s.max_term) return true;
    return s.abs_error > 1e-11 * m;
}

}  // namespace sensornet
