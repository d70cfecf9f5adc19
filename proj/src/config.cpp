#include "sensornet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "sensornet/errors.hpp"
#include "sensornet/planner.hpp"

namespace sensornet {

double Quantity::eval(double R) const {
    if (r_power == 1) return coef * R;
    if (r_power == -1) return coef / R;
    return coef;
}

bool DensityExpr::operator==(const DensityExpr& o) const {
    return family == o.family && args == o.args;
}

namespace {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string render_quantity(const Quantity& q) {
    std::string s = format_number(q.coef);
    if (q.r_power == 1) s += "R";
    if (q.r_power == -1) s += "/R";
    return s;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

class Parser {
public:
    Parser(std::string_view text, int line, std::string field)
        : text_(text), line_(line), field_(std::move(field)) {}

    DensityAssignment assignment() {
        DensityAssignment out;
        skip();
        if (peek() == '[') {
            out.per_distance = true;
            ++pos_;
            do {
                DensityExpr e = expr();
                unsigned count = 1;
                skip();
                if (peek() == '*') {
                    ++pos_;
                    count = integer();
                    if (count == 0) fail("repeat count must be positive");
                }
                out.items.emplace_back(std::move(e), count);
                skip();
            } while (accept(','));
            expect(']');
        } else {
            out.items.emplace_back(expr(), 1);
        }
        finish();
        return out;
    }

    Quantity single_quantity() {
        Quantity q = quantity();
        finish();
        return q;
    }

    std::vector<Quantity> quantity_list() {
        skip();
        expect('[');
        std::vector<Quantity> out;
        skip();
        if (!accept(']')) {
            do out.push_back(quantity());
            while (accept(','));
            expect(']');
        }
        finish();
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line_, field_, what + " at column " + std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool accept(char c) {
        skip();
        if (peek() != c) return false;
        ++pos_;
        skip();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    void finish() {
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing text");
    }

    std::string ident() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    unsigned integer() {
        skip();
        unsigned v = 0;
        const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (res.ec != std::errc()) fail("expected an integer");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        return v;
    }

    Quantity quantity() {
        skip();
        Quantity q;
        const char* begin = text_.data() + pos_;
        const auto res = std::from_chars(begin, text_.data() + text_.size(), q.coef);
        if (res.ec != std::errc() || !std::isfinite(q.coef)) fail("expected a number");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        if (peek() == 'R') {
            q.r_power = 1;
            ++pos_;
        } else if (peek() == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'R') {
            q.r_power = -1;
            pos_ += 2;
        }
        skip();
        return q;
    }

    ParamValue value() {
        skip();
        if (peek() == '[') {
            ++pos_;
            skip();
            if (accept(']')) return std::vector<Quantity>{};
            if (std::isalpha(static_cast<unsigned char>(peek()))) {
                std::vector<DensityExpr> list;
                do list.push_back(expr());
                while (accept(','));
                expect(']');
                return list;
            }
            std::vector<Quantity> list;
            do list.push_back(quantity());
            while (accept(','));
            expect(']');
            return list;
        }
        if (std::isalpha(static_cast<unsigned char>(peek()))) return std::vector<DensityExpr>{expr()};
        return quantity();
    }

    DensityExpr expr() {
        DensityExpr e;
        e.family = ident();
        expect('(');
        if (!accept(')')) {
            do {
                std::string name = ident();
                expect('=');
                for (const auto& [k, v] : e.args)
                    if (k == name) fail("duplicate parameter '" + name + "'");
                e.args.emplace_back(std::move(name), value());
            } while (accept(','));
            expect(')');
        }
        skip();
        return e;
    }

    std::string_view text_;
    int line_;
    std::string field_;
    std::size_t pos_ = 0;
};

std::string render_value(const ParamValue& v) {
    if (const auto* q = std::get_if<Quantity>(&v)) return render_quantity(*q);
    std::string s = "[";
    if (const auto* qs = std::get_if<std::vector<Quantity>>(&v)) {
        for (std::size_t i = 0; i < qs->size(); ++i) s += (i ? ", " : "") + render_quantity((*qs)[i]);
    } else {
        const auto& es = std::get<std::vector<DensityExpr>>(v);
        for (std::size_t i = 0; i < es.size(); ++i) s += (i ? ", " : "") + render_expr(es[i]);
    }
    return s + "]";
}

// Named-argument access while building a density.
class Args {
public:
    explicit Args(const DensityExpr& e) : e_(e) {}

    const ParamValue* find(const std::string& name) {
        for (const auto& [k, v] : e_.args)
            if (k == name) {
                used_.push_back(k);
                return &v;
            }
        return nullptr;
    }
    double number(const std::string& name, double R) {
        const ParamValue* v = find(name);
        if (!v) throw DomainError(e_.family + ": missing parameter '" + name + "'");
        const auto* q = std::get_if<Quantity>(v);
        if (!q) throw DomainError(e_.family + ": parameter '" + name + "' must be a number");
        return q->eval(R);
    }
    std::vector<double> numbers(const std::string& name, double R, bool required) {
        const ParamValue* v = find(name);
        if (!v) {
            if (required) throw DomainError(e_.family + ": missing parameter '" + name + "'");
            return {};
        }
        const auto* qs = std::get_if<std::vector<Quantity>>(v);
        if (!qs) throw DomainError(e_.family + ": parameter '" + name + "' must be a list of numbers");
        std::vector<double> out;
        for (const auto& q : *qs) out.push_back(q.eval(R));
        return out;
    }
    const std::vector<DensityExpr>& exprs(const std::string& name) {
        const ParamValue* v = find(name);
        if (!v) throw DomainError(e_.family + ": missing parameter '" + name + "'");
        const auto* es = std::get_if<std::vector<DensityExpr>>(v);
        if (!es) throw DomainError(e_.family + ": parameter '" + name + "' must list densities");
        return *es;
    }
    void done() const {
        for (const auto& [k, v] : e_.args)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                throw DomainError(e_.family + ": unknown parameter '" + k + "'");
    }

private:
    const DensityExpr& e_;
    std::vector<std::string> used_;
};

}  // namespace

DensityAssignment parse_density(std::string_view text, int line) {
    return Parser(text, line, "density").assignment();
}

std::string render_expr(const DensityExpr& e) {
    std::string s = e.family + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i)
        s += (i ? ", " : "") + e.args[i].first + "=" + render_value(e.args[i].second);
    return s + ")";
}

std::string render_density(const DensityAssignment& d) {
    if (!d.per_distance && d.items.size() == 1 && d.items.front().second == 1) return render_expr(d.items.front().first);
    std::string s = "[";
    for (std::size_t i = 0; i < d.items.size(); ++i) {
        s += (i ? ", " : "") + render_expr(d.items[i].first);
        if (d.items[i].second != 1) s += "*" + std::to_string(d.items[i].second);
    }
    return s + "]";
}

Density build_density(const DensityExpr& e, double R, double L) {
    Args args(e);
    Density out = [&]() {
        if (e.family == "uniform") return Density::uniform(L);
        if (e.family == "constant") return Density::constant(args.number("a", R), args.number("b", R), L);
        if (e.family == "exponential") return Density::exponential(args.number("lambda", R), L);
        if (e.family == "normal") return Density::normal(args.number("mu", R), args.number("sigma", R), L);
        if (e.family == "three_step") return Density::three_step(R, args.number("C", R), L);
        if (e.family == "piecewise") {
            const auto edges = args.numbers("edges", R, true);
            const auto heights = args.numbers("heights", R, true);
            if (edges.size() != heights.size() + 1)
                throw DomainError("piecewise: need one more edge than heights");
            std::vector<Step> steps;
            for (std::size_t i = 0; i < heights.size(); ++i) steps.push_back({edges[i], edges[i + 1], heights[i]});
            return Density::piecewise(std::move(steps), L);
        }
        if (e.family == "average") {
            std::vector<Density> parts;
            for (const auto& c : args.exprs("components")) parts.push_back(build_density(c, R, L));
            return Density::average(std::move(parts), args.numbers("weights", R, false));
        }
        throw DomainError("unknown density family '" + e.family + "'");
    }();
    args.done();
    return out;
}

namespace {

double parse_number(std::string_view v, int line, const std::string& key) {
    const Quantity q = Parser(v, line, key).single_quantity();
    if (q.r_power != 0) throw ParseError(line, key, "must be an absolute number");
    return q.coef;
}

template <class Int>
Int parse_integer(std::string_view v, int line, const std::string& key) {
    v = trim(v);
    Int out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError(line, key, "expected a non-negative integer");
    return out;
}

bool parse_bool(std::string_view v, int line, const std::string& key) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError(line, key, "expected true or false");
}

}  // namespace

void apply_setting(ModelConfig& c, std::string_view key_in, std::string_view value_in, int line) {
    const std::string key(trim(key_in));
    const std::string_view v = trim(value_in);
    if (v.empty()) throw ParseError(line, key, "empty value");
    if (key == "L") {
        c.L = parse_number(v, line, key);
    } else if (key == "R") {
        c.R = parse_number(v, line, key);
    } else if (key == "p") {
        c.p_target = parse_number(v, line, key);
    } else if (key == "density") {
        c.density = Parser(v, line, key).assignment();
    } else if (key == "n") {
        c.n = parse_integer<unsigned>(v, line, key);
    } else if (key == "mode") {
        if (v == "connectivity")
            c.coverage = false;
        else if (v == "coverage")
            c.coverage = true;
        else
            throw ParseError(line, key, "expected connectivity or coverage");
    } else if (key == "engine") {
        if (v == "auto")
            c.engine = Engine::automatic;
        else if (v == "closed")
            c.engine = Engine::closed_form;
        else if (v == "numeric")
            c.engine = Engine::numeric;
        else
            throw ParseError(line, key, "expected closed, numeric or auto");
    } else if (key == "grid") {
        c.grid = parse_integer<int>(v, line, key);
    } else if (key == "trials") {
        c.trials = parse_integer<std::uint64_t>(v, line, key);
    } else if (key == "seed") {
        c.seed = parse_integer<std::uint64_t>(v, line, key);
    } else if (key == "cap") {
        c.cap = parse_integer<unsigned>(v, line, key);
    } else if (key == "radii") {
        std::vector<double> radii;
        for (const auto& q : Parser(v, line, key).quantity_list()) {
            if (q.r_power != 0) throw ParseError(line, key, "radii must be absolute numbers");
            radii.push_back(q.coef);
        }
        c.radii = std::move(radii);
    } else if (key == "W") {
        c.width = parse_number(v, line, key);
    } else if (key == "n_max") {
        c.n_max = parse_integer<unsigned>(v, line, key);
    } else if (key == "cross_check") {
        c.cross_check = parse_bool(v, line, key);
    } else {
        throw ParseError(line, key, "unknown key");
    }
}

ModelConfig parse_config(std::string_view text) {
    ModelConfig c;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected key = value");
        apply_setting(c, line.substr(0, eq), line.substr(eq + 1), line_no);
    }
    return c;
}

std::string render_config(const ModelConfig& c) {
    const ModelConfig defaults;
    std::string s;
    auto put = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    put("L", format_number(c.L));
    if (c.R) put("R", format_number(*c.R));
    put("p", format_number(c.p_target));
    if (!c.density.items.empty()) put("density", render_density(c.density));
    if (c.n) put("n", std::to_string(*c.n));
    put("mode", c.coverage ? "coverage" : "connectivity");
    put("engine", to_string(c.engine));
    put("grid", std::to_string(c.grid));
    put("trials", std::to_string(c.trials));
    put("seed", std::to_string(c.seed));
    put("cap", std::to_string(c.cap));
    if (!c.radii.empty()) {
        std::string r = "[";
        for (std::size_t i = 0; i < c.radii.size(); ++i) r += (i ? ", " : "") + format_number(c.radii[i]);
        put("radii", r + "]");
    }
    if (c.width) put("W", format_number(*c.width));
    if (c.n_max) put("n_max", std::to_string(c.n_max));
    if (c.cross_check != defaults.cross_check) put("cross_check", c.cross_check ? "true" : "false");
    return s;
}

double model_radius(const ModelConfig& c, double R) {
    return c.width ? effective_radius(R, *c.width) : R;
}

DeploymentModel build_model(const ModelConfig& c, std::optional<double> R_in) {
    const std::optional<double> R = R_in ? R_in : c.R;
    if (!R) throw DomainError("no radius R configured");
    if (c.density.items.empty()) throw DomainError("no density configured");
    const double radius = model_radius(c, *R);
    if (!c.density.per_distance) return DeploymentModel::shared(c.L, radius, build_density(c.density.items.front().first, *R, c.L));
    std::vector<Density> ds;
    for (const auto& [expr, count] : c.density.items) {
        const Density d = build_density(expr, *R, c.L);
        for (unsigned i = 0; i < count; ++i) ds.push_back(d);
    }
    return DeploymentModel::per_distance(c.L, radius, std::move(ds));
}

}  // namespace sensornet
