#pragma once

// Monte Carlo oracle: networks are sampled distance by distance and the
// events proper (sum <= L), connected (proper, every distance <= R) and
// covered (connected, sum > L - R) are counted. Conditional estimates use
// the proper trials only.

#include <cstdint>
#include <optional>
#include <vector>

#include "sensornet/analytic.hpp"
#include "sensornet/kernels.hpp"
#include "sensornet/model.hpp"

namespace sensornet {

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t proper = 0;
    std::uint64_t connected = 0;
    std::uint64_t covered = 0;
    double p_connected = 0.0;
    double p_covered = 0.0;
    double stderr_connected = 0.0;
    double stderr_covered = 0.0;
    /// False when no trial was proper; the conditional estimates are then undefined.
    bool defined = false;
    /// Proper rate below 1e-4.
    bool low_efficiency = false;
};

SimResult simulate(const DeploymentModel& model, unsigned n, std::uint64_t trials, std::uint64_t seed,
                   Backend backend = Backend::parallel);

/// Results for n = 1..n_max from the same trials (trial t reuses its first
/// k draws for every k), so one pass serves a whole curve.
std::vector<SimResult> simulate_prefixes(const DeploymentModel& model, unsigned n_max,
                                         std::uint64_t trials, std::uint64_t seed,
                                         Backend backend = Backend::parallel);

/// (analytic - estimate) / stderr. With fewer than ten events on either side
/// (including an estimate of exactly 0 or 1) the estimate's own stderr is
/// unreliable and the binomial stderr of the analytic value is used.
double z_score(double analytic, double estimate, std::uint64_t proper);

struct Comparison {
    SimResult sim;
    double analytic_connected = 0.0;
    double analytic_covered = 0.0;
    double z_connected = 0.0;
    double z_covered = 0.0;
    bool pass = false;  // both |z| <= threshold
};

Comparison compare(const SimResult& sim, const ProbResult& connected, const ProbResult& covered,
                   double threshold = 3.0);

/// Simulates and compares against `connected`; coverage defaults to
/// coverage_probability(model, n).
Comparison compare(const DeploymentModel& model, unsigned n, std::uint64_t trials, std::uint64_t seed,
                   const ProbResult& connected, std::optional<ProbResult> covered = std::nullopt,
                   double threshold = 3.0);

}  // namespace sensornet
