#include "sensornet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "sensornet/convolve.hpp"
#include "sensornet/errors.hpp"

namespace sensornet {

std::string to_string(Method m) {
    switch (m) {
        case Method::trivial: return "trivial";
        case Method::uniform: return "uniform";
        case Method::desai_manjunath: return "desai_manjunath";
        case Method::constant: return "constant";
        case Method::exponential: return "exponential";
        case Method::heterogeneous: return "heterogeneous";
        case Method::average: return "average";
        case Method::three_step: return "three_step";
        case Method::numeric: return "numeric";
    }
    return "unknown";
}

ProbResult make_probability(double raw, double abs_error, Method method, bool extended) {
    ProbResult r;
    r.method = method;
    r.extended = extended;
    r.abs_error = abs_error;
    if (!std::isfinite(raw)) {
        r.valid = false;
        r.note = "non-finite value";
        r.value = 0.0;
        return r;
    }
    r.value = std::clamp(raw, 0.0, 1.0);
    if (std::fabs(r.value - raw) > abs_error) {
        r.valid = false;
        r.note = "raw value " + std::to_string(raw) + " outside [0, 1] beyond its error bound";
    }
    return r;
}

namespace {

template <class Num>
Num gamma_p_as(unsigned n, DoubleDouble x);

template <>
SignedLogValue gamma_p_as<SignedLogValue>(unsigned n, DoubleDouble x) {
    return gamma_p_log_value(n, x.to_double());
}

template <>
ExtFloat gamma_p_as<ExtFloat>(unsigned n, DoubleDouble x) {
    return gamma_p_ext(n, x);
}

DoubleDouble times(double a, unsigned k) { return dd::two_prod(a, static_cast<double>(k)); }

bool nonpositive(DoubleDouble x) { return x.hi < 0.0 || (x.hi == 0.0 && x.lo <= 0.0); }

// Mixture groups flattened to one slot per (group, segment) after truncation.
struct Slot {
    double a = 0.0;
    double b = 0.0;
    double height = 0.0;
    unsigned group_count = 0;  // distances in this slot's group
    bool last = false;         // last slot of its group
    unsigned next_count = 0;   // count of the following group, if last
};

struct PreparedMixture {
    std::vector<Slot> slots;
    std::vector<unsigned> counts;
    unsigned n = 0;
    double l = 0.0;
    bool zero = false;
};

PreparedMixture prepare(std::span<const MixtureGroup> groups, double r, double l) {
    PreparedMixture p;
    p.l = l;
    if (!(r > 0.0) || !(l > 0.0)) {
        p.zero = true;
        return p;
    }
    for (const auto& g : groups) {
        if (g.count == 0) continue;
        std::vector<Segment> kept;
        for (const auto& s : g.segments) {
            const double hi = std::min(s.b, r);
            if (s.height > 0.0 && s.a < hi) kept.push_back({s.a, hi, s.height});
        }
        if (kept.empty()) {
            p.zero = true;
            return p;
        }
        std::sort(kept.begin(), kept.end(), [](const Segment& x, const Segment& y) {
            return std::tie(x.a, x.b, x.height) < std::tie(y.a, y.b, y.height);
        });
        for (const auto& s : kept) p.slots.push_back({s.a, s.b, s.height, g.count, false, 0});
        p.slots.back().last = true;
        p.counts.push_back(g.count);
        p.n += g.count;
    }
    for (std::size_t i = 0, g = 0; i < p.slots.size(); ++i) {
        if (!p.slots[i].last) continue;
        ++g;
        p.slots[i].next_count = g < p.counts.size() ? p.counts[g] : 0;
    }
    return p;
}

template <class Num>
class MixtureEmitter {
public:
    MixtureEmitter(const PreparedMixture& p, std::vector<Num>& out)
        : p_(p), out_(out), fact_(p.n), l_(p.l) {
        for (const auto& s : p.slots) {
            std::vector<Num> pw{Num::one()};
            const Num h = Num::from(s.height);
            for (unsigned k = 1; k <= s.group_count; ++k) pw.push_back(pw.back() * h);
            powers_.push_back(std::move(pw));
        }
        scale_ = Num::one() / fact_.factorial(p.n);
        for (unsigned m : p.counts) scale_ = scale_ * fact_.factorial(m);
    }

    void run() {
        if (p_.slots.empty()) {
            out_.push_back(Num::one());  // v_0 = unit step, l > 0
            return;
        }
        visit(0, p_.slots.front().group_count, scale_, DoubleDouble(0.0));
    }

private:
    void visit(std::size_t s, unsigned remaining, const Num& coef, DoubleDouble q) {
        if (s == p_.slots.size()) {
            const DoubleDouble base = l_ - q;
            if (nonpositive(base)) return;
            out_.push_back(coef * pow(Num::from(base), p_.n));
            return;
        }
        const Slot& slot = p_.slots[s];
        const unsigned first = slot.last ? remaining : 0;
        for (unsigned ns = first; ns <= remaining; ++ns) {
            if (nonpositive(l_ - (q + times(slot.a, ns)))) break;
            const Num c1 = coef * powers_[s][ns];
            const unsigned next = slot.last ? slot.next_count : remaining - ns;
            for (unsigned plus = 0; plus <= ns; ++plus) {
                const DoubleDouble q2 = q + times(slot.a, ns - plus) + times(slot.b, plus);
                if (nonpositive(l_ - q2)) break;
                Num c2 = c1 / (fact_.factorial(plus) * fact_.factorial(ns - plus));
                if (plus % 2 == 1) c2 = -c2;
                visit(s + 1, next, c2, q2);
            }
        }
    }

    const PreparedMixture& p_;
    std::vector<Num>& out_;
    FactorialTable<Num> fact_;
    DoubleDouble l_;
    std::vector<std::vector<Num>> powers_;
    Num scale_;
};

ProbResult ratio_result(const SeriesValue& num, const SeriesValue& den, Method method) {
    if (den.terms == 0 || den.mantissa == 0.0) {
        ProbResult r = make_probability(0.0, 0.0, method);
        r.note = "no proper network: v_n(L, L) = 0";
        return r;
    }
    if (den.mantissa < 0.0 || den.mantissa <= 10.0 * den.abs_error)
        throw DegenerateModelError("v_n(L, L) is not resolved above its error bound");
    if (num.terms == 0) return make_probability(0.0, 0.0, method, den.extended);
    const Ratio q = ratio(num, den);
    return make_probability(q.value, q.abs_error, method, num.extended || den.extended);
}

void check_n(unsigned n) {
    if (n == 0) throw DomainError("number of sensors must be positive");
}

void check_geometry(double R, double L) {
    if (!(std::isfinite(R) && R > 0.0)) throw DomainError("R must be positive");
    if (!(std::isfinite(L) && L > 0.0)) throw DomainError("L must be positive");
}

void check_segment(double a, double b, double L) {
    if (!(std::isfinite(a) && std::isfinite(b) && 0.0 <= a && a < b && b <= L))
        throw DomainError("constant segment needs 0 <= a < b <= L");
}

// Sum_{i < L/R} (-1)^i C(m, i) (1 - iR/L)^n, the uniform-type series.
SeriesValue uniform_series(unsigned m, unsigned n, double R, double L, SeriesPrecision precision) {
    auto emit = [&](auto& out) {
        using Num = typename std::decay_t<decltype(out)>::value_type;
        FactorialTable<Num> fact(m);
        const DoubleDouble Ld(L);
        for (unsigned i = 0; i <= m; ++i) {
            const DoubleDouble base = (Ld - times(R, i)) / Ld;
            if (nonpositive(base)) break;
            Num t = fact.binomial(m, i) * pow(Num::from(base), n);
            out.push_back(i % 2 ? -t : t);
        }
    };
    return evaluate_series(emit, precision);
}

}  // namespace

double mixture_work(std::span<const MixtureGroup> groups) {
    double work = 1.0;
    for (const auto& g : groups) {
        // Tuples (n_j, p_j) over k segments: compositions of count into 2k parts.
        const double parts = 2.0 * static_cast<double>(g.segments.size());
        work *= std::exp(log_binomial(g.count + static_cast<std::int64_t>(parts) - 1,
                                      static_cast<std::int64_t>(parts) - 1));
    }
    return work;
}

SeriesValue v_mixture(std::span<const MixtureGroup> groups, double r, double l,
                      SeriesPrecision precision) {
    const PreparedMixture p = prepare(groups, r, l);
    if (p.zero) return SeriesValue::exact_zero();
    auto emit = [&](auto& out) {
        using Num = typename std::decay_t<decltype(out)>::value_type;
        MixtureEmitter<Num>(p, out).run();
    };
    return evaluate_series(emit, precision);
}

SeriesValue v_uniform(unsigned n, double r, double l, double L, SeriesPrecision precision) {
    const MixtureGroup g{{{0.0, L, 1.0 / L}}, n};
    return v_mixture(std::span(&g, 1), r, l, precision);
}

SeriesValue v_constant(unsigned n, double r, double l, double a, double b, SeriesPrecision precision) {
    const MixtureGroup g{{{a, b, 1.0 / (b - a)}}, n};
    return v_mixture(std::span(&g, 1), r, l, precision);
}

SeriesValue v_exponential(unsigned n, double r, double l, double lambda, double L,
                          SeriesPrecision precision) {
    if (!(r > 0.0) || !(l > 0.0)) return SeriesValue::exact_zero();
    r = std::min(r, L);
    const double norm = -std::expm1(-lambda * L);
    auto emit = [&](auto& out) {
        using Num = typename std::decay_t<decltype(out)>::value_type;
        FactorialTable<Num> fact(n);
        const Num scale = Num::one() / pow(Num::from(norm), n);
        const DoubleDouble ld(l);
        const DoubleDouble lam(lambda);
        for (unsigned i = 0; i <= n; ++i) {
            const DoubleDouble ir = times(r, i);
            const DoubleDouble rest = ld - ir;
            if (nonpositive(rest)) break;
            Num t = scale * fact.binomial(n, i) * Num::exp(-(lam * ir)) * gamma_p_as<Num>(n, lam * rest);
            out.push_back(i % 2 ? -t : t);
        }
    };
    return evaluate_series(emit, precision);
}

namespace {

std::vector<MixtureGroup> group_segments(std::span<const density_params::ConstantSegment> segments) {
    std::map<std::pair<double, double>, unsigned> counts;
    for (const auto& s : segments) ++counts[{s.a, s.b}];
    std::vector<MixtureGroup> groups;
    for (const auto& [ab, m] : counts)
        groups.push_back({{{ab.first, ab.second, 1.0 / (ab.second - ab.first)}}, m});
    return groups;
}

std::vector<MixtureGroup> three_step_groups(unsigned n, double R, double C) {
    return {{{{0.0, R, C}, {0.5 * R, 1.5 * R, 1.0 / R - C}}, n}};
}

}  // namespace

SeriesValue v_heterogeneous(std::span<const density_params::ConstantSegment> segments, double r,
                            double l, SeriesPrecision precision) {
    const auto groups = group_segments(segments);
    return v_mixture(groups, r, l, precision);
}

SeriesValue v_three_step(unsigned n, double r, double l, double R, double C, SeriesPrecision precision) {
    const auto groups = three_step_groups(n, R, C);
    return v_mixture(groups, r, l, precision);
}

ProbResult p_uniform(unsigned n, double R, double L, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    if (R >= L) return make_probability(1.0, 0.0, Method::uniform);
    const SeriesValue s = uniform_series(n, n, R, L, precision);
    return make_probability(s.value(), s.abs_error_value(), Method::uniform, s.extended);
}

ProbResult p_desai_manjunath(unsigned n, double R, double L, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    if (R >= L) return make_probability(1.0, 0.0, Method::desai_manjunath);
    const SeriesValue s = uniform_series(n - 1, n, R, L, precision);
    return make_probability(s.value(), s.abs_error_value(), Method::desai_manjunath, s.extended);
}

ProbResult p_constant(unsigned n, double R, double L, double a, double b, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    check_segment(a, b, L);
    if (a * n >= L) {
        ProbResult r = make_probability(0.0, 0.0, Method::constant);
        r.note = "a n >= L: no proper network";
        return r;
    }
    if (a >= R) return make_probability(0.0, 0.0, Method::constant);
    if (R >= b) return make_probability(1.0, 0.0, Method::constant);
    return ratio_result(v_constant(n, R, L, a, b, precision), v_constant(n, L, L, a, b, precision),
                        Method::constant);
}

ProbResult p_exponential(unsigned n, double R, double L, double lambda, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    if (!(std::isfinite(lambda) && lambda > 0.0)) throw DomainError("lambda must be positive");
    if (R >= L) return make_probability(1.0, 0.0, Method::exponential);
    const SeriesValue num = v_exponential(n, R, L, lambda, L, precision);
    const SeriesValue den = v_exponential(n, L, L, lambda, L, precision);
    return ratio_result(num, den, Method::exponential);
}

ProbResult p_heterogeneous(std::span<const density_params::ConstantSegment> segments, double R,
                           double L, SeriesPrecision precision) {
    if (segments.empty()) throw DomainError("heterogeneous: empty assignment");
    check_geometry(R, L);
    for (const auto& s : segments) check_segment(s.a, s.b, L);
    const auto groups = group_segments(segments);
    return ratio_result(v_mixture(groups, R, L, precision), v_mixture(groups, L, L, precision),
                        Method::heterogeneous);
}

ProbResult p_average(unsigned n, double R, double L, std::span<const Density> components,
                     std::span<const double> weights, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    if (components.empty()) throw DomainError("average: no components");
    if (!weights.empty() && weights.size() != components.size())
        throw DomainError("average: one weight per component");
    MixtureGroup g;
    g.count = n;
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].length() != L) throw DomainError("average: component L differs");
        const auto mix = segment_mixture(components[i]);
        if (!mix) throw DomainError("average: components must be piecewise constant");
        const double w = weights.empty() ? 1.0 / static_cast<double>(components.size()) : weights[i];
        if (!(w >= 0.0)) throw DomainError("average: negative weight");
        total += w;
        for (std::size_t j = 0; j < mix->a.size(); ++j)
            g.segments.push_back({mix->a[j], mix->b[j], w * mix->weights[j] / (mix->b[j] - mix->a[j])});
    }
    if (std::fabs(total - 1.0) > 1e-10) throw DomainError("average: weights must sum to 1");
    return ratio_result(v_mixture(std::span(&g, 1), R, L, precision),
                        v_mixture(std::span(&g, 1), L, L, precision), Method::average);
}

ProbResult p_three_step(unsigned n, double R, double L, double C, SeriesPrecision precision) {
    check_n(n);
    check_geometry(R, L);
    if (!(std::isfinite(C) && C >= 0.0 && C * R <= 1.0))
        throw DomainError("three-step: need 0 <= C <= 1/R");
    if (1.5 * R > L) throw DomainError("three-step: need 3R/2 <= L");
    const auto groups = three_step_groups(n, R, std::min(C, 1.0 / R));
    return ratio_result(v_mixture(groups, R, L, precision), v_mixture(groups, L, L, precision),
                        Method::three_step);
}

bool match_three_step(const Density& d, double R, double* C_out) {
    const auto* avg = d.as_average();
    if (!avg || avg->components.size() != 2) return false;
    const auto* c0 = avg->components[0].as_constant();
    const auto* c1 = avg->components[1].as_constant();
    if (!c0 || !c1) return false;
    auto close = [&](double x, double y) { return std::fabs(x - y) <= 1e-12 * R; };
    if (!(close(c0->a, 0.0) && close(c0->b, R) && close(c1->a, 0.5 * R) && close(c1->b, 1.5 * R)))
        return false;
    if (C_out) *C_out = avg->weights[0] / R;
    return true;
}

namespace {

constexpr double kMaxMixtureWork = 2e7;

std::optional<std::vector<Segment>> segments_of(const Density& d) {
    const auto mix = segment_mixture(d);
    if (!mix) return std::nullopt;
    std::vector<Segment> out;
    for (std::size_t j = 0; j < mix->a.size(); ++j)
        out.push_back({mix->a[j], mix->b[j], mix->weights[j] / (mix->b[j] - mix->a[j])});
    return out;
}

Method mixture_method(const Density& d, double R) {
    switch (d.family()) {
        case DensityFamily::UniformFull: return Method::uniform;
        case DensityFamily::ConstantSegment: return Method::constant;
        default: return match_three_step(d, R) ? Method::three_step : Method::average;
    }
}

bool same_segments(const std::vector<Segment>& x, const std::vector<Segment>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const Segment& s, const Segment& t) {
        return s.a == t.a && s.b == t.b && s.height == t.height;
    });
}

}  // namespace

std::optional<ClosedForm> ClosedForm::for_model(const DeploymentModel& model, unsigned n) {
    ClosedForm cf;
    cf.n_ = n;
    cf.L_ = model.length();
    if (model.is_shared()) {
        const Density& d = model.density(0);
        if (const auto* e = d.as_exponential()) {
            cf.method_ = Method::exponential;
            cf.lambda_ = e->lambda;
            return cf;
        }
        auto segs = segments_of(d);
        if (!segs) return std::nullopt;
        cf.method_ = mixture_method(d, model.radius());
        cf.groups_.push_back({std::move(*segs), n});
    } else {
        if (n > model.max_distances()) throw DomainError("model: not enough per-distance densities");
        bool all_single = true;
        for (unsigned i = 0; i < n; ++i) {
            auto segs = segments_of(model.density(i));
            if (!segs) return std::nullopt;
            all_single = all_single && segs->size() == 1;
            auto it = std::find_if(cf.groups_.begin(), cf.groups_.end(),
                                   [&](const MixtureGroup& g) { return same_segments(g.segments, *segs); });
            if (it == cf.groups_.end())
                cf.groups_.push_back({std::move(*segs), 1});
            else
                ++it->count;
        }
        std::sort(cf.groups_.begin(), cf.groups_.end(), [](const MixtureGroup& x, const MixtureGroup& y) {
            return std::lexicographical_compare(
                x.segments.begin(), x.segments.end(), y.segments.begin(), y.segments.end(),
                [](const Segment& s, const Segment& t) {
                    return std::tie(s.a, s.b, s.height) < std::tie(t.a, t.b, t.height);
                });
        });
        cf.method_ = all_single ? Method::heterogeneous : Method::average;
    }
    if (mixture_work(cf.groups_) > kMaxMixtureWork) return std::nullopt;
    return cf;
}

SeriesValue ClosedForm::v(double r, double l, SeriesPrecision precision) const {
    if (method_ == Method::exponential) return v_exponential(n_, r, l, lambda_, L_, precision);
    return v_mixture(groups_, r, l, precision);
}

std::optional<ProbResult> connectivity_closed_form(const DeploymentModel& model, unsigned n) {
    check_n(n);
    const auto cf = ClosedForm::for_model(model, n);
    if (!cf) return std::nullopt;
    const double L = model.length();
    const double R = model.radius();
    if (R >= L) return make_probability(1.0, 0.0, cf->method());
    return ratio_result(cf->v(R, L), cf->v(L, L), cf->method());
}

namespace {

// Largest reach of n distances that are each at most R.
double max_reach(const DeploymentModel& model, unsigned n) {
    double total = 0.0;
    for (unsigned i = 0; i < n; ++i) total += std::min(model.density(i).support_max(), model.radius());
    return total;
}

}  // namespace

std::optional<ProbResult> coverage_closed_form(const DeploymentModel& model, unsigned n) {
    check_n(n);
    const auto cf = ClosedForm::for_model(model, n);
    if (!cf) return std::nullopt;
    const double L = model.length();
    const double R = model.radius();
    if (R >= L) return make_probability(1.0, 0.0, cf->method());
    if (max_reach(model, n) <= L - R) return make_probability(0.0, 0.0, cf->method());
    const SeriesValue num = difference(cf->v(R, L), cf->v(R, L - R));
    return ratio_result(num, cf->v(L, L), cf->method());
}

ProbResult coverage_probability(const DeploymentModel& model, unsigned n) {
    if (auto r = coverage_closed_form(model, n)) return *r;
    return coverage_numeric(model, n, kDefaultGrid).probability;
}

}  // namespace sensornet
