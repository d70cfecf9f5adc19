#include "sensornet/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "sensornet/errors.hpp"

namespace sensornet {

namespace {

SimResult summarize(std::uint64_t trials, std::uint64_t proper, std::uint64_t connected,
                    std::uint64_t covered) {
    SimResult s;
    s.trials = trials;
    s.proper = proper;
    s.connected = connected;
    s.covered = covered;
    s.defined = proper > 0;
    s.low_efficiency = trials > 0 && static_cast<double>(proper) < 1e-4 * static_cast<double>(trials);
    if (!s.defined) return s;
    const double m = static_cast<double>(proper);
    s.p_connected = static_cast<double>(connected) / m;
    s.p_covered = static_cast<double>(covered) / m;
    s.stderr_connected = std::sqrt(s.p_connected * (1.0 - s.p_connected) / m);
    s.stderr_covered = std::sqrt(s.p_covered * (1.0 - s.p_covered) / m);
    return s;
}

PrefixTally tally(const DeploymentModel& model, unsigned n_max, std::uint64_t trials, std::uint64_t seed,
                  Backend backend) {
    if (n_max == 0) throw DomainError("number of sensors must be positive");
    if (trials == 0) throw DomainError("trials must be positive");
    if (n_max > model.max_distances()) throw DomainError("model: not enough per-distance densities");
    const DensityAt at = [&model](std::size_t i) -> const Density& { return model.density(i); };
    return run_trials(at, n_max, model.radius(), model.length(), trials, seed, backend);
}

}  // namespace

SimResult simulate(const DeploymentModel& model, unsigned n, std::uint64_t trials, std::uint64_t seed,
                   Backend backend) {
    const PrefixTally t = tally(model, n, trials, seed, backend);
    return summarize(t.trials, t.proper[n - 1], t.connected[n - 1], t.covered[n - 1]);
}

std::vector<SimResult> simulate_prefixes(const DeploymentModel& model, unsigned n_max,
                                         std::uint64_t trials, std::uint64_t seed, Backend backend) {
    const PrefixTally t = tally(model, n_max, trials, seed, backend);
    std::vector<SimResult> out;
    for (unsigned k = 0; k < n_max; ++k)
        out.push_back(summarize(t.trials, t.proper[k], t.connected[k], t.covered[k]));
    return out;
}

double z_score(double analytic, double estimate, std::uint64_t proper) {
    if (proper == 0) return std::numeric_limits<double>::quiet_NaN();
    const double m = static_cast<double>(proper);
    // The estimate's own stderr is unreliable with fewer than ten events on
    // either side; the analytic value's binomial stderr is used then.
    const double events = std::min(estimate, 1.0 - estimate) * m;
    double var = estimate * (1.0 - estimate) / m;
    if (events < 10.0) var = analytic * (1.0 - analytic) / m;
    const double diff = analytic - estimate;
    if (var <= 0.0) return std::fabs(diff) <= 1e-12 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    return diff / std::sqrt(var);
}

Comparison compare(const SimResult& sim, const ProbResult& connected, const ProbResult& covered,
                   double threshold) {
    Comparison c;
    c.sim = sim;
    c.analytic_connected = connected.value;
    c.analytic_covered = covered.value;
    if (!sim.defined) throw DegenerateModelError("simulation produced no proper network");
    c.z_connected = z_score(connected.value, sim.p_connected, sim.proper);
    c.z_covered = z_score(covered.value, sim.p_covered, sim.proper);
    c.pass = std::fabs(c.z_connected) <= threshold && std::fabs(c.z_covered) <= threshold;
    return c;
}

Comparison compare(const DeploymentModel& model, unsigned n, std::uint64_t trials, std::uint64_t seed,
                   const ProbResult& connected, std::optional<ProbResult> covered, double threshold) {
    const SimResult sim = simulate(model, n, trials, seed);
    const ProbResult cov = covered ? *covered : coverage_probability(model, n);
    return compare(sim, connected, cov, threshold);
}

}  // namespace sensornet
