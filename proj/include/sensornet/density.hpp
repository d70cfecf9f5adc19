#pragma once

// Probability densities of one inter-sensor distance on [0, L].

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sensornet/rng.hpp"

namespace sensornet {

enum class DensityFamily {
    UniformFull,
    ConstantSegment,
    TruncatedExponential,
    TruncatedNormal,
    PiecewiseConstant,
    Average,
};

std::string to_string(DensityFamily family);

struct Step {
    double lo = 0.0;
    double hi = 0.0;
    double height = 0.0;

    bool operator==(const Step&) const = default;
};

class Density;

namespace density_params {

struct UniformFull {};
struct ConstantSegment {
    double a = 0.0;
    double b = 0.0;
};
struct TruncatedExponential {
    double lambda = 0.0;
    double norm = 0.0;  // lambda / (1 - exp(-lambda L))
};
struct TruncatedNormal {
    double mu = 0.0;
    double sigma = 0.0;
    double norm = 0.0;  // 1 / (Phi((L - mu)/sigma) - Phi(-mu/sigma))
};
struct PiecewiseConstant {
    std::vector<Step> steps;
    std::vector<double> mass_before;  // cdf at each step's lo
};
struct Average {
    std::vector<Density> components;
    std::vector<double> weights;
    std::vector<double> cumulative;
};

}  // namespace density_params

/// Immutable normalized density on [0, L]. Construct through the factories,
/// which validate parameters and throw DomainError.
class Density {
public:
    static Density uniform(double L);
    static Density constant(double a, double b, double L);
    static Density exponential(double lambda, double L);
    static Density normal(double mu, double sigma, double L);
    static Density piecewise(std::vector<Step> steps, double L);
    /// Mixture of components sharing the same L. Empty weights mean 1/k each.
    static Density average(std::vector<Density> components, std::vector<double> weights = {});
    /// Height C on [0, R] plus height 1/R - C on [R/2, 3R/2].
    static Density three_step(double R, double C, double L);

    DensityFamily family() const;
    double length() const { return L_; }

    double pdf(double s) const;
    double cdf(double s) const;
    /// Probability mass in [lo, hi].
    double mass(double lo, double hi) const { return cdf(hi) - cdf(lo); }
    /// Integral over [lo, hi] of f(s) * (alpha + beta * s).
    double integrate_linear(double lo, double hi, double alpha, double beta) const;
    /// Points in [0, L] where f may be discontinuous or non-smooth, sorted.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    /// Infimum and supremum of the support.
    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }

    double sample(CounterRng& rng) const;

    const density_params::ConstantSegment* as_constant() const {
        return std::get_if<density_params::ConstantSegment>(&params_);
    }
    const density_params::TruncatedExponential* as_exponential() const {
        return std::get_if<density_params::TruncatedExponential>(&params_);
    }
    const density_params::TruncatedNormal* as_normal() const {
        return std::get_if<density_params::TruncatedNormal>(&params_);
    }
    const density_params::PiecewiseConstant* as_piecewise() const {
        return std::get_if<density_params::PiecewiseConstant>(&params_);
    }
    const density_params::Average* as_average() const {
        return std::get_if<density_params::Average>(&params_);
    }

    /// True when f is constant between consecutive breakpoints.
    bool is_piecewise_constant() const;

    std::string describe() const;

private:
    using Params = std::variant<density_params::UniformFull, density_params::ConstantSegment,
                                density_params::TruncatedExponential, density_params::TruncatedNormal,
                                density_params::PiecewiseConstant, density_params::Average>;

    Density(double L, Params params);
    void finish();

    double L_;
    Params params_;
    std::vector<double> breakpoints_;
    double support_min_ = 0.0;
    double support_max_ = 0.0;
};

/// A density restricted to [0, r] without renormalization.
class TruncatedDensity {
public:
    TruncatedDensity(const Density& base, double r) : base_(&base), r_(r) {}
    double pdf(double s) const { return (s < 0.0 || s > r_) ? 0.0 : base_->pdf(s); }
    double mass() const { return r_ <= 0.0 ? 0.0 : base_->cdf(r_); }
    double bound() const { return r_; }
    const Density& base() const { return *base_; }

private:
    const Density* base_;
    double r_;
};

/// Equal-width histogram of d with `bins` bins (bin masses taken from the
/// cdf, so aligned piecewise-constant densities are reproduced exactly).
Density as_piecewise_constant(const Density& d, int bins);

/// Constant segments and mixture weights of a density built only from
/// uniform, constant, piecewise-constant and average parts; nullopt otherwise.
struct SegmentMixture {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> weights;
};
std::optional<SegmentMixture> segment_mixture(const Density& d);

}  // namespace sensornet
