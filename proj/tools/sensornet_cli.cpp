// Command-line front end: probabilities, minimal sensor counts, estimates,
// tables, simulations and curves for one-dimensional sensor networks.
//
//   sensornet prob --config model.cfg 30
//   sensornet solve density="constant(a=0.4R, b=1.4R)" R=50
//   sensornet table --config table.cfg
//
// Exit codes: 0 ok, 2 parse error, 3 domain error, 4 precision or
// degenerate-model error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sensornet/analytic.hpp"
#include "sensornet/bounds.hpp"
#include "sensornet/config.hpp"
#include "sensornet/errors.hpp"
#include "sensornet/montecarlo.hpp"
#include "sensornet/planner.hpp"

using namespace sensornet;

namespace {

enum ExitCode { kOk = 0, kParse = 2, kDomain = 3, kPrecision = 4 };

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

struct Options {
    std::string config_path;
    std::optional<std::string> engine;
    std::optional<int> grid;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> cap;
    bool csv = false;
    std::vector<std::string> args;  // key=value overrides and an optional count
};

struct Invocation {
    ModelConfig config;
    std::optional<unsigned> count;
};

unsigned parse_count(const std::string& text) {
    unsigned value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value == 0)
        throw ParseError(0, "n", "expected a positive integer, got '" + text + "'");
    return value;
}

Invocation load(const Options& o) {
    Invocation inv;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ParseError(0, "--config", "cannot open " + o.config_path);
        std::stringstream text;
        text << in.rdbuf();
        inv.config = parse_config(text.str());
    }
    for (const std::string& a : o.args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) {
            if (inv.count) throw ParseError(0, "n", "more than one count given");
            inv.count = parse_count(a);
        } else {
            apply_setting(inv.config, a.substr(0, eq), a.substr(eq + 1));
        }
    }
    ModelConfig& c = inv.config;
    if (o.engine) apply_setting(c, "engine", *o.engine);
    if (o.grid) c.grid = *o.grid;
    if (o.trials) c.trials = *o.trials;
    if (o.seed) c.seed = *o.seed;
    if (o.cap) c.cap = *o.cap;
    return inv;
}

unsigned require_count(const Invocation& inv, const char* what) {
    if (inv.count) return *inv.count;
    if (inv.config.n) return *inv.config.n;
    throw DomainError(std::string("no ") + what + " given (positional argument or n = ...)");
}

EngineOptions engine_of(const ModelConfig& c) { return {c.engine, c.grid}; }

void warn(const std::string& w) {
    if (!w.empty()) std::cerr << "warning: " << w << "\n";
}

void print_prob(const ProbResult& r, unsigned n, bool csv) {
    if (csv) {
        std::cout << "n,value,abs_error,method,valid,extended\n"
                  << n << ',' << num(r.value) << ',' << num(r.abs_error) << ',' << to_string(r.method) << ','
                  << (r.valid ? "true" : "false") << ',' << (r.extended ? "true" : "false") << "\n";
    } else {
        std::cout << "n=" << n << "\nvalue=" << num(r.value) << "\nabs_error=" << num(r.abs_error)
                  << "\nmethod=" << to_string(r.method) << "\n";
        if (r.extended) std::cout << "extended=true\n";
        if (!r.valid) std::cout << "valid=false\n";
    }
    if (!r.note.empty()) std::cerr << "note: " << r.note << "\n";
}

int cmd_prob(const Options& o, bool coverage) {
    const Invocation inv = load(o);
    const unsigned n = require_count(inv, "sensor count");
    const DeploymentModel m = build_model(inv.config);
    std::string warning;
    const ProbResult r = coverage ? coverage_probability(m, n, engine_of(inv.config), &warning)
                                  : connectivity_probability(m, n, engine_of(inv.config), &warning);
    warn(warning);
    print_prob(r, n, o.csv);
    return kOk;
}

int cmd_solve(const Options& o) {
    const Invocation inv = load(o);
    const ModelConfig& c = inv.config;
    const DeploymentModel m = build_model(c);
    const EngineOptions eo = engine_of(c);
    std::string warning;
    const auto n_min = c.coverage ? min_sensors_coverage(m, c.p_target, c.cap, eo, &warning)
                                  : min_sensors_exact(m, c.p_target, c.cap, eo, &warning);
    warn(warning);
    if (!n_min) {
        std::cerr << "no n up to the scan cap reaches p = " << num(c.p_target) << "\n";
        throw DomainError("target probability not reached");
    }
    auto prob = [&](unsigned n) {
        return c.coverage ? coverage_probability(m, n, eo) : connectivity_probability(m, n, eo);
    };
    const double at = prob(*n_min).value;
    const std::string before =
        *n_min > 1 ? num(prob(*n_min - 1).value) : std::string(c.coverage && m.radius() < m.length() ? "0" : "1");
    if (o.csv) {
        std::cout << "n_min,p_at_min,p_before_min,p_target\n"
                  << *n_min << ',' << num(at) << ',' << before << ',' << num(c.p_target) << "\n";
    } else {
        std::cout << "n_min=" << *n_min << "\np_at_min=" << num(at) << "\np_before_min=" << before
                  << "\np_target=" << num(c.p_target) << "\n";
    }
    return kOk;
}

int cmd_estimate(const Options& o) {
    const Invocation inv = load(o);
    const ModelConfig& c = inv.config;
    const DeploymentModel m = build_model(c);
    if (!m.is_shared()) throw DomainError("estimates need one shared density");
    const Density& d = m.density(0);
    const double L = m.length();
    const double R = m.radius();
    std::vector<std::pair<std::string, BoundResult>> rows;
    std::optional<long long> max_count;
    switch (d.family()) {
        case DensityFamily::UniformFull:
        case DensityFamily::TruncatedExponential:
            // A decreasing density only shortens gaps, so the uniform count also suffices.
            rows.emplace_back("min_sensors", uniform_min_sensors(c.p_target, R, L));
            break;
        case DensityFamily::ConstantSegment: {
            const auto& s = *d.as_constant();
            rows.emplace_back("min_sensors", constant_min_sensors(c.p_target, L, s.a, s.b, R));
            if (s.a > 0.0) max_count = constant_max_sensors(L, s.a);
            break;
        }
        case DensityFamily::TruncatedNormal: {
            const auto& s = *d.as_normal();
            rows.emplace_back("max_sensors", normal_max_sensors(c.p_target, L, R, s.mu, s.sigma));
            if (!o.csv) std::cout << "epsilon=" << num(normal_epsilon(s.mu, s.sigma, R)) << "\n";
            break;
        }
        default:
            throw DomainError("no closed-form estimate for " + d.describe());
    }
    if (o.csv) std::cout << "kind,raw,n_bound,branch\n";
    for (const auto& [kind, b] : rows) {
        if (o.csv)
            std::cout << kind << ',' << num(b.raw) << ',' << b.n_bound << ',' << b.branch << "\n";
        else
            std::cout << kind << "=" << b.n_bound << "\nraw=" << num(b.raw)
                      << (b.branch.empty() ? "" : "\nbranch=" + b.branch) << "\n";
    }
    if (max_count) {
        if (o.csv)
            std::cout << "zero_from," << *max_count << ',' << *max_count << ",\n";
        else
            std::cout << "zero_from=" << *max_count << "\n";
    }
    return kOk;
}

int cmd_table(const Options& o) {
    const Invocation inv = load(o);
    const ModelConfig& c = inv.config;
    if (c.radii.empty()) throw DomainError("table needs radii = [..]");
    if (c.density.items.empty()) throw DomainError("no density configured");
    if (c.density.per_distance) throw DomainError("table needs one shared density");
    TableRequest req;
    const DensityExpr expr = c.density.items.front().first;
    const std::optional<double> W = c.width;
    // Densities scale with the physical radius; the model sees the effective one.
    req.density = [expr, W, L = c.L](double r) {
        const double R = W ? std::sqrt(r * r + *W * *W) : r;
        return build_density(expr, R, L);
    };
    for (double R : c.radii) req.radii.push_back(model_radius(c, R));
    req.p_target = c.p_target;
    req.L = c.L;
    req.cap = c.cap;
    req.engine = engine_of(c);
    req.cross_check = c.cross_check;
    const auto rows = generate_table(req);
    std::cout << "radius,n_min,n_estimate,n_max,p_target\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const PlanRow& r = rows[i];
        std::cout << num(c.radii[i]) << ',' << (r.n_min ? std::to_string(*r.n_min) : "") << ','
                  << (r.n_estimate ? std::to_string(*r.n_estimate) : "") << ','
                  << (r.n_max ? std::to_string(*r.n_max) : "") << ',' << num(r.p_target) << "\n";
        if (r.disputed) std::cerr << "disputed R=" << num(c.radii[i]) << ": " << r.note << "\n";
        else if (!r.note.empty()) std::cerr << "note R=" << num(c.radii[i]) << ": " << r.note << "\n";
    }
    return kOk;
}

int cmd_simulate(const Options& o) {
    const Invocation inv = load(o);
    const ModelConfig& c = inv.config;
    const unsigned n = require_count(inv, "sensor count");
    const DeploymentModel m = build_model(c);
    std::string warning;
    const ProbResult conn = connectivity_probability(m, n, engine_of(c), &warning);
    const ProbResult cov = coverage_probability(m, n, engine_of(c), &warning);
    warn(warning);
    const SimResult s = simulate(m, n, c.trials, c.seed);
    if (s.low_efficiency) std::cerr << "warning: fewer than 1e-4 of the trials were proper networks\n";
    const Comparison cmp = compare(s, conn, cov);
    if (o.csv) {
        std::cout << "n,trials,proper,connected,covered,p_connected,stderr_connected,analytic_connected,z_connected,"
                     "p_covered,stderr_covered,analytic_covered,z_covered,pass\n"
                  << n << ',' << s.trials << ',' << s.proper << ',' << s.connected << ',' << s.covered << ','
                  << num(s.p_connected) << ',' << num(s.stderr_connected) << ',' << num(conn.value) << ','
                  << num(cmp.z_connected) << ',' << num(s.p_covered) << ',' << num(s.stderr_covered) << ','
                  << num(cov.value) << ',' << num(cmp.z_covered) << ',' << (cmp.pass ? "true" : "false") << "\n";
    } else {
        std::cout << "n=" << n << "\ntrials=" << s.trials << "\nproper=" << s.proper << "\nconnected=" << s.connected
                  << "\ncovered=" << s.covered << "\np_connected=" << num(s.p_connected) << " +- "
                  << num(s.stderr_connected) << "\nanalytic_connected=" << num(conn.value)
                  << "\nz_connected=" << num(cmp.z_connected) << "\np_covered=" << num(s.p_covered) << " +- "
                  << num(s.stderr_covered) << "\nanalytic_covered=" << num(cov.value)
                  << "\nz_covered=" << num(cmp.z_covered) << "\npass=" << (cmp.pass ? "true" : "false") << "\n";
    }
    return kOk;
}

int cmd_curve(const Options& o) {
    const Invocation inv = load(o);
    const ModelConfig& c = inv.config;
    const unsigned n_max = inv.count ? *inv.count : c.n_max;
    if (n_max == 0) throw DomainError("no curve length given (positional argument or n_max = ...)");
    const DeploymentModel m = build_model(c);
    std::string warning;
    const auto curve = c.coverage ? coverage_curve(m, n_max, engine_of(c), &warning)
                                  : connectivity_curve(m, n_max, engine_of(c), &warning);
    warn(warning);
    std::cout << "n,p,abs_error\n";
    for (unsigned n = 1; n <= curve.size(); ++n)
        std::cout << n << ',' << num(curve[n - 1].value) << ',' << num(curve[n - 1].abs_error) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Connectivity and coverage of random one-dimensional sensor networks"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config_path, "Configuration file (key = value lines)");
    app.add_option("--engine", o.engine, "closed, numeric or auto")
        ->check(CLI::IsMember({"closed", "numeric", "auto"}));
    app.add_option("--grid", o.grid, "Grid size of the numerical engine");
    app.add_option("--trials", o.trials, "Monte Carlo trials");
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_option("--cap", o.cap, "Largest n scanned by solve");
    app.add_flag("--csv", o.csv, "Emit CSV");

    struct Command {
        const char* name;
        const char* help;
        std::function<int()> run;
    };
    const std::vector<Command> commands{
        {"prob", "Probability of connectivity for n sensors", [&] { return cmd_prob(o, false); }},
        {"coverage", "Probability of connectivity and coverage for n sensors", [&] { return cmd_prob(o, true); }},
        {"solve", "Minimal n reaching p (mode = coverage for the coverage problem)", [&] { return cmd_solve(o); }},
        {"estimate", "Closed-form sensor-count estimates for the configured density", [&] { return cmd_estimate(o); }},
        {"table", "CSV table of minimal counts over radii", [&] { return cmd_table(o); }},
        {"simulate", "Monte Carlo estimate and z-scores against the analytic engine", [&] { return cmd_simulate(o); }},
        {"curve", "CSV of P_n for n = 1..n_max", [&] { return cmd_curve(o); }},
    };
    std::vector<CLI::App*> subs;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("args", o.args, "key=value overrides and an optional count");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return commands[i].run();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return kPrecision;
    } catch (const DegenerateModelError& e) {
        std::cerr << "degenerate model: " << e.what() << "\n";
        return kPrecision;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
