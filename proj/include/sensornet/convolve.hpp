#pragma once

// Numerical engine for v_n(r, l) by iterated truncated convolution
// v_k(r, l) = int_0^r f_k(s) v_{k-1}(r, l - s) ds with v_0 the unit step.
// Works for any density. The convolution uses product-integration weights
// against the piecewise-linear interpolant of v_{k-1}, so jumps of f and
// values of r between grid nodes are integrated exactly; the remaining
// error is O(h^2) and is estimated by comparing grids N and N/2.

#include <span>
#include <vector>

#include "sensornet/analytic.hpp"
#include "sensornet/kernels.hpp"
#include "sensornet/model.hpp"

namespace sensornet {

inline constexpr int kDefaultGrid = 4096;
inline constexpr int kMinGrid = 64;

/// v values of one sweep at the requested l, for k = 1..n_max.
/// Actual value = scaled[k-1][i] * exp(log_scale[k-1]).
struct SweepResult {
    std::vector<std::vector<double>> scaled;
    std::vector<double> log_scale;
};

/// Runs n_max convolution steps on the grid h = L / N and samples each
/// v_k(r, .) at the points `ls` by linear interpolation.
SweepResult sweep(const DensityAt& density, std::size_t n_max, double r, double L, int N,
                  std::span<const double> ls, Backend backend = Backend::parallel);

struct NumericValue {
    double value = 0.0;
    double abs_error = 0.0;  // Richardson estimate |v_N - v_{N/2}| / 3
};

/// v_n(r, l) for distance i drawn from densities[i], all on the same [0, L].
/// Returns 0 for r <= 0 or l <= 0 and 1 for n = 0.
NumericValue v_numeric(std::span<const Density> densities, double r, double l, int N,
                       Backend backend = Backend::parallel);

struct NumericResult {
    ProbResult probability;
    double fine = 0.0;    // value on grid N
    double coarse = 0.0;  // value on grid N / 2
};

/// P_n = v_n(R, L) / v_n(L, L). Throws DegenerateModelError when v_n(L, L)
/// is below ten times its own error estimate.
NumericResult p_numeric(const DeploymentModel& model, unsigned n, int N,
                        Backend backend = Backend::parallel);
NumericResult coverage_numeric(const DeploymentModel& model, unsigned n, int N,
                               Backend backend = Backend::parallel);

/// P_1..P_{n_max} from one pair of sweeps. Degenerate entries are returned
/// as value 0 with valid = false instead of throwing.
std::vector<ProbResult> connectivity_curve_numeric(const DeploymentModel& model, unsigned n_max, int N,
                                                   Backend backend = Backend::parallel);
std::vector<ProbResult> coverage_curve_numeric(const DeploymentModel& model, unsigned n_max, int N,
                                               Backend backend = Backend::parallel);

}  // namespace sensornet
