#pragma once

// Closed-form connectivity and coverage probabilities.
//
// Every v_* function returns the true value of v_n(r, l), the probability
// that n independent distances all lie in [0, r] and sum to at most l, as a
// log-scaled series sum with an error estimate. Probabilities are ratios of
// two such values, so constant factors cancel.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensornet/density.hpp"
#include "sensornet/model.hpp"
#include "sensornet/special.hpp"

namespace sensornet {

enum class Method {
    trivial,
    uniform,
    desai_manjunath,
    constant,
    exponential,
    heterogeneous,
    average,
    three_step,
    numeric,
};

std::string to_string(Method m);

struct ProbResult {
    double value = 0.0;
    double abs_error = 0.0;
    Method method = Method::trivial;
    /// False when the raw value fell outside [0, 1] by more than abs_error.
    bool valid = true;
    /// True when an alternating sum had to be re-evaluated in extended precision.
    bool extended = false;
    std::string note;
};

/// Clamps raw into [0, 1], flagging the result when the move exceeds abs_error.
ProbResult make_probability(double raw, double abs_error, Method method, bool extended = false);

/// A constant piece of a density: height on [a, b].
struct Segment {
    double a = 0.0;
    double b = 0.0;
    double height = 0.0;
};

/// `count` distances drawn independently from the piecewise-constant density
/// given by `segments` (which need not be normalized).
struct MixtureGroup {
    std::vector<Segment> segments;
    unsigned count = 0;
};

/// Sign-array sum for independent groups of piecewise-constant distances:
/// each segment j receives n_j of its group's distances and p_j of those take
/// the upper endpoint, giving |Q| = sum a_j(r)(n_j - p_j) + b_j(r) p_j.
/// Segments are truncated to [0, r]. Cost is polynomial in the counts.
SeriesValue v_mixture(std::span<const MixtureGroup> groups, double r, double l,
                      SeriesPrecision precision = SeriesPrecision::automatic);

/// Estimated number of sign arrays v_mixture will visit (before pruning).
double mixture_work(std::span<const MixtureGroup> groups);

SeriesValue v_uniform(unsigned n, double r, double l, double L,
                      SeriesPrecision precision = SeriesPrecision::automatic);
SeriesValue v_constant(unsigned n, double r, double l, double a, double b,
                       SeriesPrecision precision = SeriesPrecision::automatic);
SeriesValue v_exponential(unsigned n, double r, double l, double lambda, double L,
                          SeriesPrecision precision = SeriesPrecision::automatic);
/// One constant segment [a_i, b_i] per distance; equal segments are grouped.
SeriesValue v_heterogeneous(std::span<const density_params::ConstantSegment> segments, double r,
                            double l, SeriesPrecision precision = SeriesPrecision::automatic);
SeriesValue v_three_step(unsigned n, double r, double l, double R, double C,
                         SeriesPrecision precision = SeriesPrecision::automatic);

/// Uniform sensor distances, P_n = sum_{i < L/R} (-1)^i C(n,i) (1 - iR/L)^n.
ProbResult p_uniform(unsigned n, double R, double L,
                     SeriesPrecision precision = SeriesPrecision::automatic);
/// Reference formula for uniformly placed sensors (no sink conditioning).
ProbResult p_desai_manjunath(unsigned n, double R, double L,
                             SeriesPrecision precision = SeriesPrecision::automatic);
ProbResult p_constant(unsigned n, double R, double L, double a, double b,
                      SeriesPrecision precision = SeriesPrecision::automatic);
ProbResult p_exponential(unsigned n, double R, double L, double lambda,
                         SeriesPrecision precision = SeriesPrecision::automatic);
ProbResult p_heterogeneous(std::span<const density_params::ConstantSegment> segments, double R,
                           double L, SeriesPrecision precision = SeriesPrecision::automatic);
/// Weighted average of uniform/constant/piecewise components (equal weights if empty).
ProbResult p_average(unsigned n, double R, double L, std::span<const Density> components,
                     std::span<const double> weights = {},
                     SeriesPrecision precision = SeriesPrecision::automatic);
/// Height C on [0, R] plus height 1/R - C on [R/2, 3R/2].
ProbResult p_three_step(unsigned n, double R, double L, double C,
                        SeriesPrecision precision = SeriesPrecision::automatic);

/// True when `segments` describe the three-step density for radius R,
/// in which case C is written to *C_out.
bool match_three_step(const Density& d, double R, double* C_out = nullptr);

/// Closed-form evaluator for the first n distances of a model, if the
/// density assignment has one at reasonable cost.
class ClosedForm {
public:
    static std::optional<ClosedForm> for_model(const DeploymentModel& model, unsigned n);

    Method method() const { return method_; }
    SeriesValue v(double r, double l, SeriesPrecision precision = SeriesPrecision::automatic) const;

private:
    Method method_ = Method::trivial;
    unsigned n_ = 0;
    double L_ = 0.0;
    double lambda_ = 0.0;  // exponential family only
    std::vector<MixtureGroup> groups_;
};

/// P_n = v_n(R, L) / v_n(L, L) from the closed form; nullopt if none applies.
std::optional<ProbResult> connectivity_closed_form(const DeploymentModel& model, unsigned n);

/// (v_n(R, L) - v_n(R, L - R)) / v_n(L, L) from the closed form.
std::optional<ProbResult> coverage_closed_form(const DeploymentModel& model, unsigned n);

/// Probability that the network is connected and covers [0, L]: closed form
/// when available, numerical convolution otherwise.
ProbResult coverage_probability(const DeploymentModel& model, unsigned n);

}  // namespace sensornet
