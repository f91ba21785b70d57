#include "scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loewner/errors.hpp"
#include "loewner/expression.hpp"

namespace loewner::cli {

using nlohmann::json;

namespace {

struct Position {
    int line = 1;
    int column = 1;
};

Position position_of(std::string_view text, std::size_t offset) {
    Position p;
    offset = std::min(offset, text.size());
    for (std::size_t k = 0; k < offset; ++k) {
        if (text[k] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

// Byte offset of the first `"key"` used as an object key, or npos. Keys in
// scenario files are unique enough that the first hit is the right one.
std::size_t key_offset(std::string_view text, std::string_view key, std::size_t from = 0) {
    const std::string quoted = "\"" + std::string(key) + "\"";
    for (std::size_t at = text.find(quoted, from); at != std::string_view::npos;
         at = text.find(quoted, at + 1)) {
        std::size_t k = at + quoted.size();
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
        if (k < text.size() && text[k] == ':') return at;
    }
    return std::string_view::npos;
}

class Context {
public:
    explicit Context(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& msg, std::string_view key) const {
        const std::size_t at = key_offset(text_, key);
        const Position p = position_of(text_, at == std::string_view::npos ? 0 : at);
        throw ParseError(msg, p.line, p.column);
    }

    // Column of the first character inside the string value of `key`.
    Position string_value(std::string_view key) const {
        std::size_t at = key_offset(text_, key);
        if (at == std::string_view::npos) return {};
        at = text_.find(':', at);
        at = text_.find('"', at);
        return position_of(text_, at + 1);
    }

    std::string_view text() const { return text_; }

private:
    std::string_view text_;
};

double number(const Context& ctx, const json& v, std::string_view key) {
    if (!v.is_number()) ctx.fail("'" + std::string(key) + "' must be a number", key);
    return v.get<double>();
}

Complex complex_value(const Context& ctx, const json& v, std::string_view key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    ctx.fail("'" + std::string(key) + "' must be a number or [re, im]", key);
}

const std::pair<std::string_view, Analysis> kAnalyses[] = {
    {"classify", Analysis::classify},       {"theta", Analysis::theta},
    {"spectral", Analysis::spectral},       {"nontangential", Analysis::nontangential},
    {"automorphic", Analysis::automorphic}, {"validate", Analysis::validate},
};

FieldDeclaration parse_field(const Context& ctx, const json& f) {
    FieldDeclaration decl;
    if (!f.contains("tau")) ctx.fail("field declaration needs 'tau'", "family");
    if (!f.contains("p") || !f["p"].is_string()) ctx.fail("field declaration needs a string 'p'", "family");
    decl.tau = complex_value(ctx, f["tau"], "tau");
    decl.p = f["p"].get<std::string>();
    try {
        (void)Expression::parse(decl.p);
    } catch (const ParseError& e) {
        const Position base = ctx.string_value("p");
        throw ParseError(std::string("bad p expression: ") + e.what(), base.line,
                         base.column + e.column() - 1);
    }
    if (f.contains("breakpoints")) {
        const json& b = f["breakpoints"];
        if (!b.is_array()) ctx.fail("'breakpoints' must be an array", "breakpoints");
        for (const json& x : b) decl.breakpoints.push_back(number(ctx, x, "breakpoints"));
    }
    if (f.contains("period")) {
        decl.period = number(ctx, f["period"], "period");
        if (decl.period < 0.0) ctx.fail("'period' must be non-negative", "period");
    }
    try {
        (void)make_denjoy_wolff(decl.tau);
    } catch (const DomainError& e) {
        ctx.fail(e.what(), "tau");
    }
    return decl;
}

} // namespace

std::string_view to_string(Analysis a) {
    for (const auto& [name, value] : kAnalyses) {
        if (value == a) return name;
    }
    return "?";
}

bool Scenario::wants(Analysis a) const {
    return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
}

std::string Scenario::family_name() const {
    if (catalog) return std::string(to_string(*catalog));
    return "field: p = " + field->p;
}

Scenario parse_scenario(std::string_view text) {
    const Context ctx(text);
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points at the last character read.
        const Position p = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        if (const auto colon = msg.find("syntax error"); colon != std::string::npos) {
            msg = msg.substr(colon);
        }
        throw ParseError(msg, p.line, p.column);
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object", 1, 1);

    Scenario sc;
    if (!doc.contains("family")) throw ParseError("missing 'family'", 1, 1);
    const json& fam = doc["family"];
    if (fam.is_string()) {
        try {
            sc.catalog = parse_catalog_id(fam.get<std::string>());
        } catch (const std::exception&) {
            ctx.fail("unknown catalog family '" + fam.get<std::string>() + "'", "family");
        }
    } else if (fam.is_object()) {
        sc.field = parse_field(ctx, fam);
    } else {
        ctx.fail("'family' must be a catalog id or a field declaration", "family");
    }

    if (!doc.contains("grid")) throw ParseError("missing 'grid'", 1, 1);
    const json& grid = doc["grid"];
    if (!grid.is_array()) ctx.fail("'grid' must be an array", "grid");
    if (grid.empty()) ctx.fail("'grid' must not be empty", "grid");
    for (const json& g : grid) {
        if (!g.is_object() || !g.contains("s") || !g.contains("z")) {
            ctx.fail("grid entries need 's' and 'z'", "grid");
        }
        const double s = number(ctx, g["s"], "s");
        if (!(s >= 0.0)) ctx.fail("grid start times must be non-negative", "grid");
        sc.grid.push_back({s, complex_value(ctx, g["z"], "z")});
    }

    if (!doc.contains("horizon")) throw ParseError("missing 'horizon'", 1, 1);
    sc.horizon = number(ctx, doc["horizon"], "horizon");
    double max_s = 0.0;
    for (const GridPoint& g : sc.grid) max_s = std::max(max_s, g.s);
    if (!(sc.horizon > max_s)) ctx.fail("'horizon' must exceed every grid start time", "horizon");

    if (doc.contains("integrator")) {
        const json& in = doc["integrator"];
        if (!in.is_object()) ctx.fail("'integrator' must be an object", "integrator");
        for (auto it = in.begin(); it != in.end(); ++it) {
            const double v = number(ctx, it.value(), it.key());
            if (it.key() == "rel_tol") sc.integrator.rel_tol = v;
            else if (it.key() == "abs_tol") sc.integrator.abs_tol = v;
            else if (it.key() == "max_step") sc.integrator.max_step = v;
            else if (it.key() == "output_grid") sc.integrator.output_grid = v;
            else ctx.fail("unknown integrator setting '" + it.key() + "'", it.key());
        }
    }
    sc.integrator.horizon = sc.horizon;
    try {
        sc.integrator.validate();
    } catch (const DomainError& e) {
        ctx.fail(e.what(), "integrator");
    }

    if (!doc.contains("analyses")) throw ParseError("missing 'analyses'", 1, 1);
    const json& an = doc["analyses"];
    if (!an.is_array()) ctx.fail("'analyses' must be an array", "analyses");
    if (an.empty()) ctx.fail("'analyses' must not be empty", "analyses");
    for (const json& a : an) {
        if (!a.is_string()) ctx.fail("analyses are strings", "analyses");
        const std::string name = a.get<std::string>();
        const auto* hit = std::find_if(std::begin(kAnalyses), std::end(kAnalyses),
                                       [&](const auto& e) { return e.first == name; });
        if (hit == std::end(kAnalyses)) ctx.fail("unknown analysis '" + name + "'", "analyses");
        if (!sc.wants(hit->second)) sc.analyses.push_back(hit->second);
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

EvolutionFamily build_family(const Scenario& scenario) {
    if (scenario.catalog) return catalog_family(*scenario.catalog);
    const FieldDeclaration& decl = *scenario.field;
    const Expression p = Expression::parse(decl.p);
    HerglotzField field{make_denjoy_wolff(decl.tau), [p](Complex z, double t) { return p(z, t); },
                        Breakpoints(decl.breakpoints, decl.period)};
    return integrate_family(field, scenario.integrator, scenario.family_name());
}

} // namespace loewner::cli
