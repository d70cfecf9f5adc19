#pragma once

// Closed-form estimates of the minimal (or maximal) number of sensors.

#include <string>

namespace sensornet {

enum class BoundDirection { lower, upper };

struct BoundResult {
    double raw = 0.0;         // formula value before rounding
    long long n_bound = 0;    // ceil(raw) for lower bounds, floor(raw) for upper bounds
    BoundDirection direction = BoundDirection::lower;
    std::string branch;       // which expression attained the max / min
    double first = 0.0;       // value of the first branch (if any)
    double second = 0.0;      // value of the second branch (if any)
};

/// Lower bound for uniform distances, Q = L/R - 1:
/// n >= (3(1 - Q) + sqrt((3Q - 1)^2 + 24 Q^2 (Q/(1-p) - 1))) / 2.
/// Requires p > 2/3 and 0 < R < L.
BoundResult uniform_min_sensors(double p, double R, double L);

/// (1 + 1/Q)^n >= n / (1 - p), evaluated in logs.
bool lemma4_predicate(long long n, double Q, double p);

/// Lower bound for the constant density on [a, b]:
/// max(3/2 + sqrt((1 + 5p)/(1 - p)), 1 + (L - b)/a), valid for (a+b)/2 <= R <= b, a > 0.
BoundResult constant_min_sensors(double p, double L, double a, double b, double R);

/// Smallest n with a n >= L, the count at which P_n drops to 0: ceil(L/a).
long long constant_max_sensors(double L, double a);

/// Probability mass of the untruncated normal outside [0, R]:
/// Phi(-mu/sigma) + 1 - Phi((R - mu)/sigma).
double normal_epsilon(double mu, double sigma, double R);

/// Upper bound for the truncated normal density:
/// min(p(1-p)/eps, (sqrt(4 mu L + sigma^2 z^2) - sigma z)^2 / (4 mu^2)), z = Phi^-1(p).
BoundResult normal_max_sensors(double p, double L, double R, double mu, double sigma);
/// Same with a given eps (eps = 0 disables the first branch).
BoundResult normal_max_sensors_with_epsilon(double p, double L, double mu, double sigma, double eps);

}  // namespace sensornet
