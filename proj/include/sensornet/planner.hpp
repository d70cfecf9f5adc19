#pragma once

// Minimal sensor counts for the connectivity and coverage problems, the
// table generator and the strip-to-line radius reduction.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sensornet/analytic.hpp"
#include "sensornet/convolve.hpp"
#include "sensornet/model.hpp"

namespace sensornet {

enum class Engine { automatic, closed_form, numeric };

std::string to_string(Engine e);

struct EngineOptions {
    Engine engine = Engine::automatic;
    int grid = kDefaultGrid;
};

/// Probability of connectivity of the first n distances.
/// `warning`, if given, receives a note when the requested engine was unavailable.
ProbResult connectivity_probability(const DeploymentModel& model, unsigned n, const EngineOptions& opts = {},
                                    std::string* warning = nullptr);
ProbResult coverage_probability(const DeploymentModel& model, unsigned n, const EngineOptions& opts,
                                std::string* warning = nullptr);

/// P_1..P_{n_max} (connectivity or coverage).
std::vector<ProbResult> connectivity_curve(const DeploymentModel& model, unsigned n_max,
                                           const EngineOptions& opts = {}, std::string* warning = nullptr);
std::vector<ProbResult> coverage_curve(const DeploymentModel& model, unsigned n_max,
                                       const EngineOptions& opts = {}, std::string* warning = nullptr);

/// ceil(10 L / R), the default scan limit.
unsigned default_cap(const DeploymentModel& model);

/// First upward crossing of the target along n = 1..cap: the smallest n with
/// P_n >= p and P_{n-1} < p, where P_0 = 1 for connectivity and
/// P_0 = 0 (1 if R >= L) for coverage. If the curve starts at or above p and
/// never drops below it, the answer is 1. nullopt if nothing qualifies.
/// For constant densities the scan stops at the first n with a n >= L.
std::optional<unsigned> first_crossing(const std::function<ProbResult(unsigned)>& prob, double p,
                                       unsigned cap, double p0);

std::optional<unsigned> min_sensors_exact(const DeploymentModel& model, double p_target, unsigned cap = 0,
                                          const EngineOptions& opts = {}, std::string* warning = nullptr);
std::optional<unsigned> min_sensors_coverage(const DeploymentModel& model, double p_target, unsigned cap = 0,
                                             const EngineOptions& opts = {}, std::string* warning = nullptr);

/// sqrt(R^2 - W^2): a gap of at most this length along a strip of width W
/// keeps two sensors within R. Requires 0 <= W < R.
double effective_radius(double R, double W);

struct PlanRow {
    double radius = 0.0;
    std::optional<unsigned> n_min;
    std::optional<long long> n_estimate;
    std::optional<long long> n_max;
    double p_target = 0.0;
    double p_at_min = 0.0;      // P(n_min)
    double p_before_min = 0.0;  // P(n_min - 1), P_0 convention for n_min = 1
    bool disputed = false;      // closed form and numeric engine disagree
    std::string note;
};

struct TableRequest {
    /// Density for a given radius (table densities scale with R).
    std::function<Density(double R)> density;
    std::vector<double> radii;
    double p_target = 0.95;
    double L = 1000.0;
    unsigned cap = 0;  // 0: default_cap per radius
    EngineOptions engine;
    /// Also evaluate P(n_min) and P(n_min - 1) numerically and flag disagreement.
    bool cross_check = false;
};

std::vector<PlanRow> generate_table(const TableRequest& request);

}  // namespace sensornet
