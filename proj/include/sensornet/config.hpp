#pragma once

// Flat key = value model configuration.
//
//   # comment
//   L = 1000
//   R = 50
//   p = 0.95
//   density = constant(a=0.2R, b=1.6R)
//   radii = [200, 150, 100, 50, 25]
//
// Numbers may be suffixed with R (times the radius) or /R (divided by it),
// so one density line serves a whole table of radii. Density expressions:
//
//   uniform()
//   constant(a=.., b=..)
//   exponential(lambda=..)
//   normal(mu=.., sigma=..)
//   piecewise(edges=[e0, e1, ..], heights=[h1, ..])
//   average(components=[expr, expr, ..], weights=[w1, ..])   weights optional
//   three_step(C=..)
//   [expr*count, expr, ..]                                   one entry per distance

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sensornet/density.hpp"
#include "sensornet/model.hpp"
#include "sensornet/planner.hpp"

namespace sensornet {

/// coef * R^r_power, r_power in {-1, 0, 1}.
struct Quantity {
    double coef = 0.0;
    int r_power = 0;

    double eval(double R) const;
    bool operator==(const Quantity&) const = default;
};

struct DensityExpr;
using ParamValue = std::variant<Quantity, std::vector<Quantity>, std::vector<DensityExpr>>;

struct DensityExpr {
    std::string family;
    std::vector<std::pair<std::string, ParamValue>> args;

    bool operator==(const DensityExpr&) const;
};

struct DensityAssignment {
    std::vector<std::pair<DensityExpr, unsigned>> items;
    bool per_distance = false;  // written as a bracketed list

    bool operator==(const DensityAssignment&) const = default;
};

/// Parses a density assignment; throws ParseError tagged with `line`.
DensityAssignment parse_density(std::string_view text, int line = 0);
std::string render_density(const DensityAssignment& d);
std::string render_expr(const DensityExpr& e);

/// Evaluates an expression for radius R on [0, L]; throws DomainError.
Density build_density(const DensityExpr& e, double R, double L);

struct ModelConfig {
    double L = 1000.0;
    std::optional<double> R;
    double p_target = 0.95;
    DensityAssignment density;
    std::optional<unsigned> n;
    bool coverage = false;  // mode = coverage
    Engine engine = Engine::automatic;
    int grid = kDefaultGrid;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    unsigned cap = 0;
    std::vector<double> radii;
    std::optional<double> width;  // strip width W; the model uses sqrt(R^2 - W^2)
    unsigned n_max = 0;
    bool cross_check = false;

    bool operator==(const ModelConfig&) const = default;
};

ModelConfig parse_config(std::string_view text);
std::string render_config(const ModelConfig& c);
/// Applies one `key=value` (command-line override; errors report line 0).
void apply_setting(ModelConfig& c, std::string_view key, std::string_view value, int line = 0);

/// Radius after the strip-width reduction.
double model_radius(const ModelConfig& c, double R);
/// Model for radius R (the configured R if omitted); throws DomainError.
DeploymentModel build_model(const ModelConfig& c, std::optional<double> R = std::nullopt);

}  // namespace sensornet
