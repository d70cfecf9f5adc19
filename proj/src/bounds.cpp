#include "sensornet/bounds.hpp"

#include <cmath>
#include <limits>

#include "sensornet/errors.hpp"
#include "sensornet/special.hpp"

namespace sensornet {

namespace {

// Rounding that ignores the last few ulps of raw, so 93 computed as
// 93.00000000000001 still rounds to 93.
long long round_up(double raw) {
    return static_cast<long long>(std::ceil(raw - 1e-12 * std::max(1.0, std::fabs(raw))));
}

long long round_down(double raw) {
    return static_cast<long long>(std::floor(raw + 1e-12 * std::max(1.0, std::fabs(raw))));
}

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("target probability must lie in (0, 1)");
}

}  // namespace

BoundResult uniform_min_sensors(double p, double R, double L) {
    check_probability(p);
    if (!(p > 2.0 / 3.0)) throw DomainError("uniform estimate needs p > 2/3");
    if (!(R > 0.0 && R < L)) throw DomainError("uniform estimate needs 0 < R < L");
    const double Q = L / R - 1.0;
    const double disc = (3.0 * Q - 1.0) * (3.0 * Q - 1.0) + 24.0 * Q * Q * (Q / (1.0 - p) - 1.0);
    BoundResult b;
    b.raw = 0.5 * (3.0 * (1.0 - Q) + std::sqrt(disc));
    b.first = b.raw;
    b.n_bound = std::max(1LL, round_up(b.raw));
    b.direction = BoundDirection::lower;
    b.branch = "uniform";
    return b;
}

bool lemma4_predicate(long long n, double Q, double p) {
    if (n < 1) throw DomainError("gap predicate needs n >= 1");
    if (!(Q > 0.0)) throw DomainError("gap predicate needs Q > 0");
    check_probability(p);
    const double lhs = static_cast<double>(n) * std::log1p(1.0 / Q);
    const double rhs = std::log(static_cast<double>(n)) - std::log1p(-p);
    return lhs >= rhs - 1e-12 * std::max(1.0, std::fabs(rhs));
}

BoundResult constant_min_sensors(double p, double L, double a, double b, double R) {
    check_probability(p);
    if (!(a > 0.0 && a < b && b <= L)) throw DomainError("constant estimate needs 0 < a < b <= L");
    if (!(0.5 * (a + b) <= R && R <= b)) throw DomainError("constant estimate needs (a+b)/2 <= R <= b");
    BoundResult out;
    out.first = 1.5 + std::sqrt((1.0 + 5.0 * p) / (1.0 - p));
    out.second = 1.0 + (L - b) / a;
    out.direction = BoundDirection::lower;
    if (out.first >= out.second) {
        out.raw = out.first;
        out.branch = "probability";
    } else {
        out.raw = out.second;
        out.branch = "length";
    }
    out.n_bound = round_up(out.raw);
    return out;
}

long long constant_max_sensors(double L, double a) {
    if (!(a > 0.0)) throw DomainError("maximal count is unbounded for a = 0");
    if (!(L > 0.0)) throw DomainError("L must be positive");
    return round_up(L / a);
}

double normal_epsilon(double mu, double sigma, double R) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    return phi(-mu / sigma) + phi(-(R - mu) / sigma);
}

BoundResult normal_max_sensors_with_epsilon(double p, double L, double mu, double sigma, double eps) {
    check_probability(p);
    if (!(mu > 0.0)) throw DomainError("normal estimate needs mu > 0");
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(eps >= 0.0)) throw DomainError("epsilon must be >= 0");
    const double z = phi_inverse(p);
    const double root = std::sqrt(4.0 * mu * L + sigma * sigma * z * z) - sigma * z;
    BoundResult out;
    out.first = eps > 0.0 ? p * (1.0 - p) / eps : std::numeric_limits<double>::infinity();
    out.second = root * root / (4.0 * mu * mu);
    out.direction = BoundDirection::upper;
    if (out.first <= out.second) {
        out.raw = out.first;
        out.branch = "tail";
    } else {
        out.raw = out.second;
        out.branch = "length";
    }
    out.n_bound = round_down(out.raw);
    return out;
}

BoundResult normal_max_sensors(double p, double L, double R, double mu, double sigma) {
    if (!(mu > 0.0 && mu < R)) throw DomainError("normal estimate needs 0 < mu < R");
    return normal_max_sensors_with_epsilon(p, L, mu, sigma, normal_epsilon(mu, sigma, R));
}

}  // namespace sensornet
