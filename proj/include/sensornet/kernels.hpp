#pragma once

// Data-parallel inner loops: one truncated convolution step on a grid and
// the Monte Carlo trial loop. Each has a serial reference and an OpenMP
// version; both produce bitwise identical output because every output
// element (or per-trial outcome) is computed by the same sequential code
// and integer tallies are merged associatively.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sensornet/density.hpp"

namespace sensornet {

enum class Backend { serial, parallel };

/// Product-integration weights of a density against the hat basis
/// phi_j(s) = max(0, 1 - |s/h - j|) on a grid of step h.
///
/// left[j]  = int_{(j-1)h}^{jh} f phi_j, right[j] = int_{jh}^{(j+1)h} f phi_j,
/// window[j] = int_0^r f phi_j. Only indices with a nonzero overlap with
/// [0, r] are stored.
struct StepWeights {
    double h = 0.0;
    double r = 0.0;
    std::vector<double> full;    // left[j] + right[j]
    std::vector<double> left;
    std::vector<double> window;  // weights for outputs with i h > r
    std::size_t full_until = 0;  // outputs i <= full_until have i h <= r

    static StepWeights build(const Density& d, double r, double h, std::size_t grid_points);
};

/// out[i] = int_0^min(r, ih) f(s) v(ih - s) ds with v the piecewise-linear
/// interpolant of `in` (zero for negative arguments).
void convolve_step(const StepWeights& w, std::span<const double> in, std::span<double> out,
                   Backend backend);

/// Monte Carlo tallies for n = 1..n_max distances drawn by one trial.
/// Index k - 1 holds the counts for the first k distances.
struct PrefixTally {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> proper;
    std::vector<std::uint64_t> connected;
    std::vector<std::uint64_t> covered;

    explicit PrefixTally(std::size_t n_max = 0)
        : proper(n_max, 0), connected(n_max, 0), covered(n_max, 0) {}
    void merge(const PrefixTally& other);
};

/// Density of distance i (0-based) for a trial.
using DensityAt = std::function<const Density&(std::size_t)>;

/// Runs trials [0, trials) where trial t draws from CounterRng(seed, t).
PrefixTally run_trials(const DensityAt& density, std::size_t n_max, double R, double L,
                       std::uint64_t trials, std::uint64_t seed, Backend backend);

}  // namespace sensornet
