#include "sensornet/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sensornet/errors.hpp"
#include "sensornet/special.hpp"

namespace sensornet {

namespace dp = density_params;

std::string to_string(DensityFamily family) {
    switch (family) {
        case DensityFamily::UniformFull: return "uniform";
        case DensityFamily::ConstantSegment: return "constant";
        case DensityFamily::TruncatedExponential: return "exponential";
        case DensityFamily::TruncatedNormal: return "normal";
        case DensityFamily::PiecewiseConstant: return "piecewise";
        case DensityFamily::Average: return "average";
    }
    return "unknown";
}

namespace {

constexpr double kNormTolerance = 1e-10;

void require(bool ok, const char* message) {
    if (!ok) throw DomainError(message);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

Density::Density(double L, Params params) : L_(L), params_(std::move(params)) { finish(); }

Density Density::uniform(double L) {
    require(finite_positive(L), "uniform density: L must be positive");
    return Density(L, dp::UniformFull{});
}

Density Density::constant(double a, double b, double L) {
    require(finite_positive(L), "constant density: L must be positive");
    require(std::isfinite(a) && std::isfinite(b), "constant density: endpoints must be finite");
    require(0.0 <= a && a < b, "constant density: need 0 <= a < b");
    require(b <= L, "constant density: support must lie inside [0, L]");
    return Density(L, dp::ConstantSegment{a, b});
}

Density Density::exponential(double lambda, double L) {
    require(finite_positive(L), "exponential density: L must be positive");
    require(finite_positive(lambda), "exponential density: lambda must be positive");
    return Density(L, dp::TruncatedExponential{lambda, lambda / -std::expm1(-lambda * L)});
}

Density Density::normal(double mu, double sigma, double L) {
    require(finite_positive(L), "normal density: L must be positive");
    require(finite_positive(sigma), "normal density: sigma must be positive");
    require(std::isfinite(mu), "normal density: mu must be finite");
    const double mass = phi_interval(-mu / sigma, (L - mu) / sigma);
    require(mass > 1e-300, "normal density: no mass inside [0, L]");
    return Density(L, dp::TruncatedNormal{mu, sigma, 1.0 / mass});
}

Density Density::piecewise(std::vector<Step> steps, double L) {
    require(finite_positive(L), "piecewise density: L must be positive");
    require(!steps.empty(), "piecewise density: needs at least one step");
    std::sort(steps.begin(), steps.end(), [](const Step& x, const Step& y) { return x.lo < y.lo; });
    dp::PiecewiseConstant p;
    double total = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Step& s = steps[i];
        require(std::isfinite(s.lo) && std::isfinite(s.hi) && std::isfinite(s.height),
                "piecewise density: non-finite step");
        require(s.lo < s.hi, "piecewise density: step with lo >= hi");
        require(s.height >= 0.0, "piecewise density: negative height");
        require(s.lo >= 0.0 && s.hi <= L, "piecewise density: step outside [0, L]");
        if (i > 0) require(steps[i - 1].hi <= s.lo, "piecewise density: overlapping steps");
        p.mass_before.push_back(total);
        total += s.height * (s.hi - s.lo);
    }
    require(std::fabs(total - 1.0) <= kNormTolerance, "piecewise density: does not integrate to 1");
    p.steps = std::move(steps);
    return Density(L, std::move(p));
}

Density Density::average(std::vector<Density> components, std::vector<double> weights) {
    require(!components.empty(), "average density: needs at least one component");
    const double L = components.front().length();
    for (const auto& c : components)
        require(c.length() == L, "average density: components must share the same L");
    if (weights.empty()) weights.assign(components.size(), 1.0 / static_cast<double>(components.size()));
    require(weights.size() == components.size(), "average density: one weight per component");
    double total = 0.0;
    std::vector<double> cumulative;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, "average density: weights must be >= 0");
        total += w;
        cumulative.push_back(total);
    }
    require(std::fabs(total - 1.0) <= kNormTolerance, "average density: weights must sum to 1");
    return Density(L, dp::Average{std::move(components), std::move(weights), std::move(cumulative)});
}

Density Density::three_step(double R, double C, double L) {
    require(finite_positive(R), "three-step density: R must be positive");
    require(std::isfinite(C) && C >= 0.0 && C * R <= 1.0, "three-step density: need 0 <= C <= 1/R");
    require(1.5 * R <= L, "three-step density: need 3R/2 <= L");
    const double w = C * R;
    return average({constant(0.0, R, L), constant(0.5 * R, 1.5 * R, L)}, {w, 1.0 - w});
}

void Density::finish() {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dp::ConstantSegment>) {
                breakpoints_ = {p.a, p.b};
                support_min_ = p.a;
                support_max_ = p.b;
            } else if constexpr (std::is_same_v<T, dp::PiecewiseConstant>) {
                for (const auto& s : p.steps) {
                    breakpoints_.push_back(s.lo);
                    breakpoints_.push_back(s.hi);
                }
                support_min_ = L_;
                support_max_ = 0.0;
                for (const auto& s : p.steps) {
                    if (s.height <= 0.0) continue;
                    support_min_ = std::min(support_min_, s.lo);
                    support_max_ = std::max(support_max_, s.hi);
                }
            } else if constexpr (std::is_same_v<T, dp::Average>) {
                support_min_ = L_;
                support_max_ = 0.0;
                for (std::size_t i = 0; i < p.components.size(); ++i) {
                    const auto& c = p.components[i];
                    breakpoints_.insert(breakpoints_.end(), c.breakpoints().begin(), c.breakpoints().end());
                    if (p.weights[i] <= 0.0) continue;
                    support_min_ = std::min(support_min_, c.support_min());
                    support_max_ = std::max(support_max_, c.support_max());
                }
            } else {
                breakpoints_ = {0.0, L_};
                support_min_ = 0.0;
                support_max_ = L_;
            }
        },
        params_);
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

    if (std::fabs(cdf(L_) - 1.0) > kNormTolerance)
        throw DomainError("density does not integrate to 1 on [0, L]");
}

DensityFamily Density::family() const {
    return static_cast<DensityFamily>(params_.index());
}

double Density::pdf(double s) const {
    if (s < 0.0 || s > L_) return 0.0;
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dp::UniformFull>) {
                return 1.0 / L_;
            } else if constexpr (std::is_same_v<T, dp::ConstantSegment>) {
                return (s >= p.a && s <= p.b) ? 1.0 / (p.b - p.a) : 0.0;
            } else if constexpr (std::is_same_v<T, dp::TruncatedExponential>) {
                return p.norm * std::exp(-p.lambda * s);
            } else if constexpr (std::is_same_v<T, dp::TruncatedNormal>) {
                const double z = (s - p.mu) / p.sigma;
                return p.norm * std::exp(-0.5 * z * z) / (p.sigma * std::sqrt(2.0 * std::numbers::pi));
            } else if constexpr (std::is_same_v<T, dp::PiecewiseConstant>) {
                auto it = std::upper_bound(p.steps.begin(), p.steps.end(), s,
                                           [](double x, const Step& st) { return x < st.lo; });
                if (it == p.steps.begin()) return 0.0;
                --it;
                return s <= it->hi ? it->height : 0.0;
            } else {
                double f = 0.0;
                for (std::size_t i = 0; i < p.components.size(); ++i)
                    f += p.weights[i] * p.components[i].pdf(s);
                return f;
            }
        },
        params_);
}

double Density::cdf(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= L_) s = L_;
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dp::UniformFull>) {
                return s / L_;
            } else if constexpr (std::is_same_v<T, dp::ConstantSegment>) {
                if (s <= p.a) return 0.0;
                if (s >= p.b) return 1.0;
                return (s - p.a) / (p.b - p.a);
            } else if constexpr (std::is_same_v<T, dp::TruncatedExponential>) {
                return std::expm1(-p.lambda * s) / std::expm1(-p.lambda * L_);
            } else if constexpr (std::is_same_v<T, dp::TruncatedNormal>) {
                return p.norm * phi_interval(-p.mu / p.sigma, (s - p.mu) / p.sigma);
            } else if constexpr (std::is_same_v<T, dp::PiecewiseConstant>) {
                auto it = std::upper_bound(p.steps.begin(), p.steps.end(), s,
                                           [](double x, const Step& st) { return x < st.lo; });
                if (it == p.steps.begin()) return 0.0;
                const std::size_t i = static_cast<std::size_t>(it - p.steps.begin()) - 1;
                const Step& st = p.steps[i];
                return p.mass_before[i] + st.height * (std::min(s, st.hi) - st.lo);
            } else {
                double F = 0.0;
                for (std::size_t i = 0; i < p.components.size(); ++i)
                    F += p.weights[i] * p.components[i].cdf(s);
                return F;
            }
        },
        params_);
}

double Density::integrate_linear(double lo, double hi, double alpha, double beta) const {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, L_);
    if (!(hi > lo)) return 0.0;

    // Five-point Gauss-Legendre on each smooth piece between breakpoints.
    static constexpr double x[] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                   -0.9061798459386640};
    static constexpr double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                   0.2369268850561891, 0.2369268850561891};
    auto piece = [&](double p, double q) {
        const double half = 0.5 * (q - p);
        const double mid = 0.5 * (p + q);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double s = mid + half * x[i];
            acc += w[i] * pdf(s) * (alpha + beta * s);
        }
        return acc * half;
    };

    if (const auto* avg = as_average()) {
        double total = 0.0;
        for (std::size_t k = 0; k < avg->components.size(); ++k)
            total += avg->weights[k] * avg->components[k].integrate_linear(lo, hi, alpha, beta);
        return total;
    }
    // Long pieces of the smooth families use closed forms; short ones keep
    // the quadrature, which avoids the cancellation of differenced primitives.
    if (const auto* e = as_exponential(); e && (hi - lo) * e->lambda > 0.25) {
        const double lam = e->lambda;
        const double ep = std::exp(-lam * lo);
        const double eq = std::exp(-lam * hi);
        const double m0 = (ep - eq) / lam;
        const double m1 = (lo * ep - hi * eq) / lam + m0 / lam;
        return e->norm * (alpha * m0 + beta * m1);
    }
    if (const auto* nd = as_normal(); nd && (hi - lo) > 0.25 * nd->sigma) {
        const double zp = (lo - nd->mu) / nd->sigma;
        const double zq = (hi - nd->mu) / nd->sigma;
        constexpr double inv_sqrt_2pi = 0.3989422804014327;
        const double dphi = inv_sqrt_2pi * (std::exp(-0.5 * zp * zp) - std::exp(-0.5 * zq * zq));
        return nd->norm * ((alpha + beta * nd->mu) * phi_interval(zp, zq) + beta * nd->sigma * dphi);
    }

    double total = 0.0;
    double start = lo;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
    for (; it != breakpoints_.end() && *it < hi; ++it) {
        total += piece(start, *it);
        start = *it;
    }
    total += piece(start, hi);
    return total;
}

double Density::sample(CounterRng& rng) const {
    const double u = rng.uniform();
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dp::UniformFull>) {
                return u * L_;
            } else if constexpr (std::is_same_v<T, dp::ConstantSegment>) {
                return p.a + u * (p.b - p.a);
            } else if constexpr (std::is_same_v<T, dp::TruncatedExponential>) {
                return std::min(L_, -std::log1p(u * std::expm1(-p.lambda * L_)) / p.lambda);
            } else if constexpr (std::is_same_v<T, dp::TruncatedNormal>) {
                // Inverse cdf on the lower tail side of the truncation range.
                const double alpha = -p.mu / p.sigma;
                const double beta = (L_ - p.mu) / p.sigma;
                double z;
                if (alpha >= 0.0) {
                    const double qa = phi(-alpha);
                    const double qb = phi(-beta);
                    const double q = std::clamp(qa - u * (qa - qb), 1e-300, 1.0 - 1e-16);
                    z = -phi_inverse(q);
                } else {
                    const double pa = phi(alpha);
                    const double pb = phi(beta);
                    const double q = std::clamp(pa + u * (pb - pa), 1e-300, 1.0 - 1e-16);
                    z = phi_inverse(q);
                }
                return std::clamp(p.mu + p.sigma * z, 0.0, L_);
            } else if constexpr (std::is_same_v<T, dp::PiecewiseConstant>) {
                auto it = std::upper_bound(p.mass_before.begin(), p.mass_before.end(), u);
                std::size_t i = static_cast<std::size_t>(it - p.mass_before.begin());
                i = i == 0 ? 0 : i - 1;
                // Skip zero-height steps sharing the same cumulative mass.
                while (p.steps[i].height <= 0.0 && i + 1 < p.steps.size()) ++i;
                const Step& st = p.steps[i];
                return std::clamp(st.lo + (u - p.mass_before[i]) / st.height, st.lo, st.hi);
            } else {
                auto it = std::upper_bound(p.cumulative.begin(), p.cumulative.end(), u);
                std::size_t i = static_cast<std::size_t>(it - p.cumulative.begin());
                if (i >= p.components.size()) i = p.components.size() - 1;
                while (p.weights[i] <= 0.0 && i > 0) --i;
                return p.components[i].sample(rng);
            }
        },
        params_);
}

bool Density::is_piecewise_constant() const {
    switch (family()) {
        case DensityFamily::UniformFull:
        case DensityFamily::ConstantSegment:
        case DensityFamily::PiecewiseConstant: return true;
        case DensityFamily::Average:
            return std::all_of(as_average()->components.begin(), as_average()->components.end(),
                               [](const Density& c) { return c.is_piecewise_constant(); });
        default: return false;
    }
}

std::string Density::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dp::UniformFull>) {
                os << "uniform(L=" << L_ << ")";
            } else if constexpr (std::is_same_v<T, dp::ConstantSegment>) {
                os << "constant(a=" << p.a << ", b=" << p.b << ")";
            } else if constexpr (std::is_same_v<T, dp::TruncatedExponential>) {
                os << "exponential(lambda=" << p.lambda << ")";
            } else if constexpr (std::is_same_v<T, dp::TruncatedNormal>) {
                os << "normal(mu=" << p.mu << ", sigma=" << p.sigma << ")";
            } else if constexpr (std::is_same_v<T, dp::PiecewiseConstant>) {
                os << "piecewise(" << p.steps.size() << " steps)";
            } else {
                os << "average(";
                for (std::size_t i = 0; i < p.components.size(); ++i)
                    os << (i ? ", " : "") << p.weights[i] << "*" << p.components[i].describe();
                os << ")";
            }
        },
        params_);
    return os.str();
}

Density as_piecewise_constant(const Density& d, int bins) {
    if (bins < 1) throw DomainError("as_piecewise_constant: bins must be >= 1");
    const double L = d.length();
    const double width = L / bins;
    std::vector<double> masses(static_cast<std::size_t>(bins));
    double total = 0.0;
    for (int i = 0; i < bins; ++i) {
        const double lo = i * width;
        const double hi = (i + 1 == bins) ? L : (i + 1) * width;
        masses[static_cast<std::size_t>(i)] = std::max(0.0, d.mass(lo, hi));
        total += masses[static_cast<std::size_t>(i)];
    }
    std::vector<Step> steps;
    for (int i = 0; i < bins; ++i) {
        const double lo = i * width;
        const double hi = (i + 1 == bins) ? L : (i + 1) * width;
        steps.push_back({lo, hi, masses[static_cast<std::size_t>(i)] / total / (hi - lo)});
    }
    // Absorb the last rounding residue so the steps pass the normalization check.
    double check = 0.0;
    for (const auto& s : steps) check += s.height * (s.hi - s.lo);
    steps.back().height += (1.0 - check) / (steps.back().hi - steps.back().lo);
    return Density::piecewise(std::move(steps), L);
}

std::optional<SegmentMixture> segment_mixture(const Density& d) {
    SegmentMixture out;
    auto add = [&](double a, double b, double w) {
        if (w <= 0.0) return;
        out.a.push_back(a);
        out.b.push_back(b);
        out.weights.push_back(w);
    };
    switch (d.family()) {
        case DensityFamily::UniformFull: add(0.0, d.length(), 1.0); return out;
        case DensityFamily::ConstantSegment: add(d.as_constant()->a, d.as_constant()->b, 1.0); return out;
        case DensityFamily::PiecewiseConstant:
            for (const auto& s : d.as_piecewise()->steps) add(s.lo, s.hi, s.height * (s.hi - s.lo));
            return out;
        case DensityFamily::Average: {
            const auto& avg = *d.as_average();
            for (std::size_t i = 0; i < avg.components.size(); ++i) {
                auto sub = segment_mixture(avg.components[i]);
                if (!sub) return std::nullopt;
                for (std::size_t j = 0; j < sub->a.size(); ++j)
                    add(sub->a[j], sub->b[j], avg.weights[i] * sub->weights[j]);
            }
            return out;
        }
        default: return std::nullopt;
    }
}

}  // namespace sensornet
