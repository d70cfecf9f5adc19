#include "sensornet/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "sensornet/rng.hpp"

namespace sensornet {

StepWeights StepWeights::build(const Density& d, double r, double h, std::size_t grid_points) {
    StepWeights w;
    w.h = h;
    w.r = std::min(r, d.length());
    if (!(w.r > 0.0)) return w;

    // Snap r to a node when it is one up to rounding.
    const double ratio = w.r / h;
    const double nearest = std::round(ratio);
    const bool on_node = std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio);
    const std::size_t whole = on_node ? static_cast<std::size_t>(nearest)
                                      : static_cast<std::size_t>(std::floor(ratio));
    const std::size_t cells = on_node ? whole : whole + 1;
    w.full_until = std::min(whole, grid_points - 1);

    w.full.assign(cells + 1, 0.0);
    w.left.assign(cells + 1, 0.0);
    w.window.assign(cells + 1, 0.0);
    std::vector<double> right(cells + 1, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double lo = static_cast<double>(c) * h;
        const double hi = (c + 1 == cells && !on_node) ? w.r : static_cast<double>(c + 1) * h;
        const double i0 = d.integrate_linear(lo, hi, 1.0, 0.0);
        const double i1 = d.integrate_linear(lo, hi, -static_cast<double>(c), 1.0 / h);
        w.window[c] += i0 - i1;
        w.window[c + 1] += i1;
        if (c < whole) {
            right[c] = i0 - i1;
            w.left[c + 1] = i1;
        }
    }
    for (std::size_t j = 0; j <= cells; ++j) w.full[j] = w.left[j] + right[j];
    return w;
}

namespace {

inline double output_at(const StepWeights& w, const double* in, std::size_t i) {
    double acc = 0.0;
    if (i <= w.full_until) {
        for (std::size_t j = 0; j < i; ++j) acc += w.full[j] * in[i - j];
        if (i < w.left.size()) acc += w.left[i] * in[0];
        return acc;
    }
    const std::size_t top = std::min(i, w.window.size() - 1);
    for (std::size_t j = 0; j <= top; ++j) acc += w.window[j] * in[i - j];
    return acc;
}

}  // namespace

void convolve_step(const StepWeights& w, std::span<const double> in, std::span<double> out,
                   Backend backend) {
    const std::size_t n = out.size();
    if (w.window.empty()) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double* src = in.data();
    double* dst = out.data();
    if (backend == Backend::serial) {
        for (std::size_t i = 0; i < n; ++i) dst[i] = output_at(w, src, i);
        return;
    }
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i) dst[i] = output_at(w, src, static_cast<std::size_t>(i));
}

void PrefixTally::merge(const PrefixTally& other) {
    trials += other.trials;
    for (std::size_t k = 0; k < proper.size(); ++k) {
        proper[k] += other.proper[k];
        connected[k] += other.connected[k];
        covered[k] += other.covered[k];
    }
}

namespace {

void one_trial(const DensityAt& density, std::size_t n_max, double R, double L, std::uint64_t seed,
               std::uint64_t t, PrefixTally& tally) {
    CounterRng rng(seed, t);
    double sum = 0.0;
    bool linked = true;
    ++tally.trials;
    for (std::size_t k = 0; k < n_max; ++k) {
        const double y = density(k).sample(rng);
        sum += y;
        if (sum > L) return;  // later prefixes are improper too
        linked = linked && y <= R;
        ++tally.proper[k];
        if (linked) {
            ++tally.connected[k];
            if (sum > L - R) ++tally.covered[k];
        }
    }
}

}  // namespace

PrefixTally run_trials(const DensityAt& density, std::size_t n_max, double R, double L,
                       std::uint64_t trials, std::uint64_t seed, Backend backend) {
    PrefixTally total(n_max);
    if (backend == Backend::serial) {
        for (std::uint64_t t = 0; t < trials; ++t) one_trial(density, n_max, R, L, seed, t, total);
        return total;
    }
#pragma omp parallel
    {
        PrefixTally local(n_max);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t)
            one_trial(density, n_max, R, L, seed, static_cast<std::uint64_t>(t), local);
#pragma omp critical
        total.merge(local);
    }
    return total;
}

}  // namespace sensornet
