#include "sensornet/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sensornet/bounds.hpp"
#include "sensornet/errors.hpp"

namespace sensornet {

std::string to_string(Engine e) {
    switch (e) {
        case Engine::automatic: return "auto";
        case Engine::closed_form: return "closed";
        case Engine::numeric: return "numeric";
    }
    return "unknown";
}

namespace {

void set_warning(std::string* warning, const std::string& text) {
    if (warning && warning->empty()) *warning = text;
}

bool use_numeric(const DeploymentModel& model, unsigned n, const EngineOptions& opts, std::string* warning) {
    if (opts.engine == Engine::numeric) return true;
    if (ClosedForm::for_model(model, n)) return false;
    if (opts.engine == Engine::closed_form)
        set_warning(warning, "no closed form for this density assignment; using the numeric engine");
    return true;
}

ProbResult checked(ProbResult r, unsigned n) {
    if (!r.valid)
        throw PrecisionError("P_" + std::to_string(n) + " could not be resolved: " + r.note);
    return r;
}

// Beyond this many distances no proper network exists (every distance is at
// least the smallest support point), so P_n = 0.
unsigned proper_limit(const DeploymentModel& model, unsigned cap) {
    const std::size_t count = model.is_shared() ? 1 : model.densities().size();
    double smallest = model.length();
    for (std::size_t i = 0; i < count; ++i) smallest = std::min(smallest, model.density(i).support_min());
    if (!(smallest > 0.0)) return cap;
    const double limit = std::ceil(model.length() / smallest - 1e-12);
    return limit < cap ? static_cast<unsigned>(std::max(1.0, limit)) : cap;
}

double p0_connectivity() { return 1.0; }

double p0_coverage(const DeploymentModel& model) { return model.radius() >= model.length() ? 1.0 : 0.0; }

}  // namespace

ProbResult connectivity_probability(const DeploymentModel& model, unsigned n, const EngineOptions& opts,
                                    std::string* warning) {
    if (n == 0) throw DomainError("number of sensors must be positive");
    if (use_numeric(model, n, opts, warning)) return p_numeric(model, n, opts.grid).probability;
    return *connectivity_closed_form(model, n);
}

ProbResult coverage_probability(const DeploymentModel& model, unsigned n, const EngineOptions& opts,
                                std::string* warning) {
    if (n == 0) throw DomainError("number of sensors must be positive");
    if (use_numeric(model, n, opts, warning)) return coverage_numeric(model, n, opts.grid).probability;
    return *coverage_closed_form(model, n);
}

namespace {

std::vector<ProbResult> curve(const DeploymentModel& model, unsigned n_max, const EngineOptions& opts,
                              std::string* warning, bool coverage) {
    std::vector<ProbResult> out;
    if (n_max == 0) return out;
    if (use_numeric(model, n_max, opts, warning))
        return coverage ? coverage_curve_numeric(model, n_max, opts.grid)
                        : connectivity_curve_numeric(model, n_max, opts.grid);
    for (unsigned n = 1; n <= n_max; ++n)
        out.push_back(coverage ? coverage_probability(model, n, opts, warning)
                               : connectivity_probability(model, n, opts, warning));
    return out;
}

}  // namespace

std::vector<ProbResult> connectivity_curve(const DeploymentModel& model, unsigned n_max,
                                           const EngineOptions& opts, std::string* warning) {
    return curve(model, n_max, opts, warning, false);
}

std::vector<ProbResult> coverage_curve(const DeploymentModel& model, unsigned n_max, const EngineOptions& opts,
                                       std::string* warning) {
    return curve(model, n_max, opts, warning, true);
}

unsigned default_cap(const DeploymentModel& model) {
    return static_cast<unsigned>(std::max(1.0, std::ceil(10.0 * model.length() / model.radius() - 1e-9)));
}

std::optional<unsigned> first_crossing(const std::function<ProbResult(unsigned)>& prob, double p,
                                       unsigned cap, double p0) {
    double prev = p0;
    bool dropped = false;
    for (unsigned n = 1; n <= cap; ++n) {
        const double value = checked(prob(n), n).value;
        if (value >= p && prev < p) return n;
        if (value < p) dropped = true;
        prev = value;
    }
    if (!dropped && cap >= 1) return 1u;
    return std::nullopt;
}

namespace {

void check_target(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("target probability must lie in (0, 1]");
}

std::optional<unsigned> scan(const DeploymentModel& model, double p, unsigned cap, const EngineOptions& opts,
                             std::string* warning, bool coverage) {
    check_target(p);
    if (cap == 0) cap = default_cap(model);
    if (!model.is_shared()) cap = std::min<unsigned>(cap, static_cast<unsigned>(model.max_distances()));
    cap = proper_limit(model, cap);
    const double p0 = coverage ? p0_coverage(model) : p0_connectivity();
    if (opts.engine == Engine::numeric || !ClosedForm::for_model(model, 1)) {
        const auto values = curve(model, cap, opts, warning, coverage);
        return first_crossing([&](unsigned n) { return values[n - 1]; }, p, cap, p0);
    }
    return first_crossing(
        [&](unsigned n) {
            return coverage ? coverage_probability(model, n, opts, warning)
                            : connectivity_probability(model, n, opts, warning);
        },
        p, cap, p0);
}

}  // namespace

std::optional<unsigned> min_sensors_exact(const DeploymentModel& model, double p_target, unsigned cap,
                                          const EngineOptions& opts, std::string* warning) {
    return scan(model, p_target, cap, opts, warning, false);
}

std::optional<unsigned> min_sensors_coverage(const DeploymentModel& model, double p_target, unsigned cap,
                                             const EngineOptions& opts, std::string* warning) {
    return scan(model, p_target, cap, opts, warning, true);
}

double effective_radius(double R, double W) {
    if (!(R > 0.0)) throw DomainError("R must be positive");
    if (!(W >= 0.0)) throw DomainError("strip width must be >= 0");
    if (W >= R) throw DomainError("strip width must be smaller than R");
    return std::sqrt((R - W) * (R + W));
}

namespace {

void fill_estimates(PlanRow& row, const Density& d, double p, double L, double R) {
    try {
        switch (d.family()) {
            case DensityFamily::UniformFull:
                row.n_estimate = uniform_min_sensors(p, R, L).n_bound;
                break;
            case DensityFamily::ConstantSegment: {
                const auto& c = *d.as_constant();
                if (c.a > 0.0) row.n_max = constant_max_sensors(L, c.a);
                row.n_estimate = constant_min_sensors(p, L, c.a, c.b, R).n_bound;
                break;
            }
            case DensityFamily::TruncatedNormal: {
                const auto& nd = *d.as_normal();
                row.n_max = normal_max_sensors(p, L, R, nd.mu, nd.sigma).n_bound;
                break;
            }
            default: break;
        }
    } catch (const DomainError&) {
        // The estimate's preconditions do not hold for this radius.
    }
}

bool agree(const ProbResult& x, const ProbResult& y) {
    return std::fabs(x.value - y.value) <= 3.0 * (x.abs_error + y.abs_error) + 1e-9;
}

}  // namespace

std::vector<PlanRow> generate_table(const TableRequest& request) {
    check_target(request.p_target);
    std::vector<PlanRow> rows;
    for (double R : request.radii) {
        const DeploymentModel model = DeploymentModel::shared(request.L, R, request.density(R));
        PlanRow row;
        row.radius = R;
        row.p_target = request.p_target;

        std::map<unsigned, ProbResult> memo;
        auto prob = [&](unsigned n) -> ProbResult {
            auto it = memo.find(n);
            if (it != memo.end()) return it->second;
            return memo.emplace(n, connectivity_probability(model, n, request.engine, &row.note)).first->second;
        };
        row.n_min = min_sensors_exact(model, request.p_target, request.cap, request.engine, &row.note);
        if (row.n_min) {
            row.p_at_min = prob(*row.n_min).value;
            row.p_before_min = *row.n_min > 1 ? prob(*row.n_min - 1).value : p0_connectivity();
        }
        fill_estimates(row, model.density(0), request.p_target, request.L, R);

        if (request.cross_check && row.n_min && request.engine.engine != Engine::numeric &&
            ClosedForm::for_model(model, *row.n_min)) {
            std::ostringstream note;
            note.precision(12);
            for (unsigned n = std::max(1u, *row.n_min - 1); n <= *row.n_min; ++n) {
                const ProbResult closed = prob(n);
                ProbResult numeric;
                try {
                    numeric = p_numeric(model, n, request.engine.grid).probability;
                } catch (const DegenerateModelError&) {
                    continue;
                }
                if (!agree(closed, numeric)) {
                    row.disputed = true;
                    note << "P_" << n << " closed " << closed.value << " vs numeric " << numeric.value << "; ";
                }
            }
            if (row.disputed) row.note += note.str();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sensornet
