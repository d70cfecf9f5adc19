// Serial versus OpenMP timings of the convolution step and the Monte Carlo
// trial loop.
//
//   bench_kernels [grid] [trials]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "sensornet/kernels.hpp"

using namespace sensornet;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool same) {
    std::printf("%-14s serial %9.4f s  parallel %9.4f s  speedup %5.2f  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int N = argc > 1 ? std::atoi(argv[1]) : 8192;
    const std::uint64_t trials = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2000000;
    const double L = 1000.0;
    const double R = 50.0;
    std::printf("threads %d, grid %d, trials %llu\n", omp_get_max_threads(), N,
                static_cast<unsigned long long>(trials));

    const Density d = Density::constant(0.2 * R, 1.6 * R, L);
    const std::size_t points = static_cast<std::size_t>(N) + 1;
    const double h = L / N;
    const StepWeights near = StepWeights::build(d, R, h, points);
    const StepWeights wide = StepWeights::build(d, L, h, points);
    std::vector<double> in(points, 1.0), out_s(points), out_p(points);
    for (std::size_t i = 0; i < points; ++i) in[i] = 1.0 + 1e-3 * static_cast<double>(i % 97);

    for (const auto* w : {&near, &wide}) {
        const double ts = best_of(5, [&] { convolve_step(*w, in, out_s, Backend::serial); });
        const double tp = best_of(5, [&] { convolve_step(*w, in, out_p, Backend::parallel); });
        const bool same = std::memcmp(out_s.data(), out_p.data(), points * sizeof(double)) == 0;
        report(w == &near ? "step r=R" : "step r=L", ts, tp, same);
    }

    const DensityAt at = [&d](std::size_t) -> const Density& { return d; };
    const std::size_t n_max = 30;
    PrefixTally ps, pp;
    const double ts = best_of(3, [&] { ps = run_trials(at, n_max, R, L, trials, 42, Backend::serial); });
    const double tp = best_of(3, [&] { pp = run_trials(at, n_max, R, L, trials, 42, Backend::parallel); });
    const bool same = ps.proper == pp.proper && ps.connected == pp.connected && ps.covered == pp.covered;
    report("trials n<=30", ts, tp, same);
    return same ? 0 : 1;
}
