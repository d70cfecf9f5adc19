#include "sensornet/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sensornet/errors.hpp"

namespace sensornet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_grid(int N) {
    if (N < kMinGrid) throw DomainError("grid size must be at least " + std::to_string(kMinGrid));
}

double interpolate(const std::vector<double>& v, double h, double l) {
    if (l <= 0.0) return 0.0;
    const double x = l / h;
    const auto last = v.size() - 1;
    if (x >= static_cast<double>(last)) return v[last];
    const double nearest = std::round(x);
    if (std::fabs(x - nearest) <= 1e-9 * std::max(1.0, x)) return v[static_cast<std::size_t>(nearest)];
    const auto i = static_cast<std::size_t>(std::floor(x));
    const double t = x - static_cast<double>(i);
    return (1.0 - t) * v[i] + t * v[i + 1];
}

}  // namespace

SweepResult sweep(const DensityAt& density, std::size_t n_max, double r, double L, int N,
                  std::span<const double> ls, Backend backend) {
    check_grid(N);
    const double h = L / N;
    const std::size_t points = static_cast<std::size_t>(N) + 1;
    SweepResult out;
    std::vector<double> cur(points, 1.0), next(points, 0.0);
    double log_scale = 0.0;

    const Density* cached = nullptr;
    StepWeights weights;
    for (std::size_t k = 0; k < n_max; ++k) {
        const Density& d = density(k);
        if (&d != cached) {
            weights = StepWeights::build(d, r, h, points);
            cached = &d;
        }
        convolve_step(weights, cur, next, backend);
        std::swap(cur, next);

        const double top = *std::max_element(cur.begin(), cur.end());
        if (top > 0.0 && std::isfinite(top)) {
            const double inv = 1.0 / top;
            for (double& x : cur) x *= inv;
            log_scale += std::log(top);
        } else if (!(top >= 0.0) || !std::isfinite(top)) {
            throw PrecisionError("convolution produced a non-finite value");
        }
        std::vector<double> row;
        row.reserve(ls.size());
        for (double l : ls) row.push_back(top > 0.0 ? interpolate(cur, h, l) : 0.0);
        out.scaled.push_back(std::move(row));
        out.log_scale.push_back(top > 0.0 ? log_scale : kNegInf);
    }
    return out;
}

namespace {

DensityAt density_at(std::span<const Density> ds) {
    return [ds](std::size_t i) -> const Density& { return ds[i]; };
}

DensityAt density_at(const DeploymentModel& model) {
    return [&model](std::size_t i) -> const Density& { return model.density(i); };
}

double value_of(const SweepResult& s, std::size_t k, std::size_t i) {
    const double x = s.scaled[k][i];
    return x == 0.0 ? 0.0 : x * std::exp(s.log_scale[k]);
}

}  // namespace

NumericValue v_numeric(std::span<const Density> densities, double r, double l, int N, Backend backend) {
    check_grid(N);
    if (!(r > 0.0) || !(l > 0.0)) return {};
    if (densities.empty()) return {1.0, 0.0};
    const double L = densities.front().length();
    for (const auto& d : densities)
        if (d.length() != L) throw DomainError("v_numeric: densities must share L");
    if (l > L) throw DomainError("v_numeric: l must not exceed L");
    const double pts[] = {l};
    const std::size_t n = densities.size();
    const SweepResult fine = sweep(density_at(densities), n, r, L, N, pts, backend);
    const SweepResult coarse = sweep(density_at(densities), n, r, L, N / 2, pts, backend);
    const double vf = value_of(fine, n - 1, 0);
    const double vc = value_of(coarse, n - 1, 0);
    return {vf, std::fabs(vf - vc) / 3.0};
}

namespace {

// Connectivity (coverage = false) or coverage curve on one grid: values and
// errors of numerator and denominator, in the sweep's own scale.
struct CurvePoint {
    double num = 0.0;
    double den = 0.0;
    double log_ratio_scale = 0.0;  // log of (numerator scale / denominator scale)
    double den_log_scale = 0.0;
};

std::vector<CurvePoint> curve_on_grid(const DeploymentModel& model, unsigned n_max, int N, bool coverage,
                                      Backend backend) {
    const double L = model.length();
    const double R = model.radius();
    const double at_r[] = {L, L - R};
    const double at_l[] = {L};
    const auto fd = density_at(model);
    const SweepResult sr = sweep(fd, n_max, R, L, N, std::span(at_r, coverage ? 2 : 1), backend);
    const SweepResult sl = sweep(fd, n_max, L, L, N, at_l, backend);
    std::vector<CurvePoint> out(n_max);
    for (unsigned k = 0; k < n_max; ++k) {
        CurvePoint& c = out[k];
        c.num = sr.scaled[k][0] - (coverage ? sr.scaled[k][1] : 0.0);
        c.den = sl.scaled[k][0];
        c.log_ratio_scale = (c.num == 0.0 || c.den == 0.0) ? 0.0 : sr.log_scale[k] - sl.log_scale[k];
        c.den_log_scale = sl.log_scale[k];
    }
    return out;
}

struct Combined {
    ProbResult probability;
    double fine = 0.0;
    double coarse = 0.0;
    bool degenerate = false;
};

// Typical rounding of n steps of length-N positive dot products, relative.
double rounding_floor(unsigned n, int N) {
    return static_cast<double>(n) * std::sqrt(static_cast<double>(N)) * std::numeric_limits<double>::epsilon();
}

Combined combine(const CurvePoint& f, const CurvePoint& c, double rounding) {
    Combined out;
    // v_n(L, L) must be resolved: positive on both grids and its Richardson
    // error below a tenth of its value.
    const bool vanished = !(f.den > 0.0) || !(c.den > 0.0);
    const double den_rel_error =
        vanished ? 1.0 : std::fabs(1.0 - c.den / f.den * std::exp(c.den_log_scale - f.den_log_scale)) / 3.0;
    if (vanished || den_rel_error >= 0.1) {
        out.degenerate = true;
        out.probability = make_probability(0.0, 0.0, Method::numeric);
        out.probability.valid = false;
        out.probability.note = "v_n(L, L) is not resolved on the grid";
        return out;
    }
    out.fine = f.num / f.den * std::exp(f.log_ratio_scale);
    out.coarse = c.num / c.den * std::exp(c.log_ratio_scale);
    const double err = std::fabs(out.fine - out.coarse) / 3.0 + rounding * std::max(1.0, std::fabs(out.fine));
    out.probability = make_probability(out.fine, err, Method::numeric);
    return out;
}

std::vector<ProbResult> curve(const DeploymentModel& model, unsigned n_max, int N, bool coverage,
                              Backend backend) {
    check_grid(N);
    if (n_max > model.max_distances()) throw DomainError("model: not enough per-distance densities");
    std::vector<ProbResult> out;
    if (model.radius() >= model.length()) {
        for (unsigned k = 0; k < n_max; ++k) out.push_back(make_probability(1.0, 0.0, Method::numeric));
        return out;
    }
    const auto fine = curve_on_grid(model, n_max, N, coverage, backend);
    const auto coarse = curve_on_grid(model, n_max, N / 2, coverage, backend);
    for (unsigned k = 0; k < n_max; ++k) out.push_back(combine(fine[k], coarse[k], rounding_floor(k + 1, N)).probability);
    return out;
}

NumericResult single(const DeploymentModel& model, unsigned n, int N, bool coverage, Backend backend) {
    check_grid(N);
    if (n == 0) throw DomainError("number of sensors must be positive");
    if (n > model.max_distances()) throw DomainError("model: not enough per-distance densities");
    if (model.radius() >= model.length()) return {make_probability(1.0, 0.0, Method::numeric), 1.0, 1.0};
    const auto fine = curve_on_grid(model, n, N, coverage, backend);
    const auto coarse = curve_on_grid(model, n, N / 2, coverage, backend);
    const Combined c = combine(fine.back(), coarse.back(), rounding_floor(n, N));
    if (c.degenerate) throw DegenerateModelError("v_n(L, L) is not resolved on the grid");
    return {c.probability, c.fine, c.coarse};
}

}  // namespace

NumericResult p_numeric(const DeploymentModel& model, unsigned n, int N, Backend backend) {
    return single(model, n, N, false, backend);
}

NumericResult coverage_numeric(const DeploymentModel& model, unsigned n, int N, Backend backend) {
    return single(model, n, N, true, backend);
}

std::vector<ProbResult> connectivity_curve_numeric(const DeploymentModel& model, unsigned n_max, int N,
                                                   Backend backend) {
    return curve(model, n_max, N, false, backend);
}

std::vector<ProbResult> coverage_curve_numeric(const DeploymentModel& model, unsigned n_max, int N,
                                               Backend backend) {
    return curve(model, n_max, N, true, backend);
}

}  // namespace sensornet
