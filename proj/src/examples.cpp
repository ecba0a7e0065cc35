#include "pncalc/examples.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

#include "pncalc/cartan.hpp"
#include "pncalc/hierarchy.hpp"
#include "pncalc/modular.hpp"
#include "pncalc/nijenhuis.hpp"
#include "pncalc/toda.hpp"

namespace pncalc {

std::optional<PNStructure> Example::pn() const
{
    if (pi && n) {
        return PNStructure(name, *pi, *n);
    }
    return std::nullopt;
}

Multivector hierarchy_base_bracket(const PNStructure& pn, int k)
{
    return covered_poisson(hierarchy_bivector(pn.pi, pn.n, k));
}

namespace {

constexpr int kMaxToda = kMaxRank / 2;

int parse_size(const std::string& text, const std::string& name)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("bad size in example name \"" + name + "\"");
    }
    return v;
}

double gap(const std::vector<Jet>& a, const std::vector<Jet>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i].value() - b[i].value()));
    }
    return worst;
}

CheckResult same_bivector(std::string check, const Multivector& a, const Multivector& b, std::span<const Point> points,
                          double tolerance, std::uint64_t seed)
{
    return max_residual(std::move(check), points, tolerance, seed,
                        [&](const Point& x) { return gap(a.eval(x, 0), b.eval(x, 0)); });
}

CheckResult rank_check(std::string check, const Multivector& p, int expected, std::span<const Point> points,
                       std::uint64_t seed)
{
    return max_residual(std::move(check), points, 0.5, seed, [&](const Point& x) {
        return std::abs(static_cast<double>(bivector_rank(p, x) - expected));
    });
}

Example toda_physical_example(int n)
{
    const TodaPhysical t = toda_physical(n);
    Example e;
    e.name = "toda-physical-" + std::to_string(n);
    e.algebroid = t.pn.algebroid();
    e.pi = t.pn.pi;
    e.n = t.pn.n;
    e.det_domain = toda_physical_det_domain(n);
    e.hierarchy = t.pn;
    e.extra = [t](int points, std::uint64_t seed, double tol) {
        Report r("toda physical");
        const std::vector<Point> pts = sample_points(t.pn.algebroid()->domain(), points, seed);
        const std::vector<Point> det = sample_points(toda_physical_det_domain(t.n), points, seed);
        const AlgebroidPtr& a = t.pn.algebroid();
        const Multivector lhs = sharp(t.pn.pi, differential(a, t.hamiltonian));
        const Multivector rhs = sharp(t.pi1, differential(a, t.momentum));
        r.add(max_residual("bihamiltonian pi0 dH = pi1 dh1", pts, tol, seed,
                           [&](const Point& x) { return gap(lhs.eval(x, 0), rhs.eval(x, 0)); }));
        r.add(same_bivector("pi1 = N pi0", t.pi1, hierarchy_bivector(t.pn.pi, t.pn.n, 1), pts, tol, seed));
        for (int j = 0; j <= 1; ++j) {
            r.add(toda_multi_check(t, j, det, 0.5, tol, seed));
        }
        return r;
    };
    return e;
}

Example toda_algebroid_example(int n)
{
    const TodaAlgebroid t = toda_algebroid(n);
    Example e;
    e.name = "toda-algebroid-" + std::to_string(n);
    e.algebroid = t.pn.algebroid();
    e.pi = t.pn.pi;
    e.n = t.pn.n;
    if (n <= 3) {
        e.det_domain = toda_algebroid_det_domain(n);
    }
    e.hierarchy = t.pn;
    e.extra = [t](int points, std::uint64_t seed, double tol) {
        Report r("toda algebroid");
        const std::vector<Point> pts = sample_points(t.pn.algebroid()->domain(), points, seed);
        const TodaFlaschka red = toda_flaschka_reduced(t.n);
        const Multivector c0 = covered_poisson(t.pn.pi);
        const Multivector c1 = covered_poisson(t.pi1);
        r.add(same_bivector("covered pi0 = reduced pi0", c0, red.pi0.rebind<MultivectorTag>(c0.algebroid()), pts, tol, seed));
        r.add(same_bivector("covered pi1 = reduced pi1", c1, red.pi1.rebind<MultivectorTag>(c1.algebroid()), pts, tol, seed));
        r.add(same_bivector("pi1 = N pi0", t.pi1, hierarchy_bivector(t.pn.pi, t.pn.n, 1), pts, tol, seed));
        r.add(rank_check("rank covered pi0 = 2n-2", c0, 2 * t.n - 2, pts, seed));
        return r;
    };
    return e;
}

Example toda_flaschka_example(int n)
{
    const TodaFlaschka red = toda_flaschka_reduced(n);
    const TodaAlgebroid t = toda_algebroid(n);
    Example e;
    e.name = "toda-flaschka-" + std::to_string(n);
    e.algebroid = red.pi0.algebroid();
    e.pi = red.pi0;
    e.hierarchy = t.pn;
    e.extra = [red, t](int points, std::uint64_t seed, double tol) {
        Report r("toda flaschka");
        const std::vector<Point> pts = sample_points(red.pi0.algebroid()->domain(), points, seed);
        r.append(is_poisson(red.pi1, pts, tol, seed));
        const Multivector s01 = schouten(red.pi0, red.pi1);
        r.add(max_residual("schouten[pi0,pi1]", pts, tol, seed, [&](const Point& x) { return skew::max_value(s01.eval(x, 0)); }));
        r.add(rank_check("rank pi0 = 2n-2", red.pi0, 2 * red.n - 2, pts, seed));
        const Multivector c0 = hierarchy_base_bracket(t.pn, 0).rebind<MultivectorTag>(red.pi0.algebroid());
        const Multivector c1 = hierarchy_base_bracket(t.pn, 1).rebind<MultivectorTag>(red.pi0.algebroid());
        r.add(same_bivector("pi0 = covered algebroid pi0", red.pi0, c0, pts, tol, seed));
        r.add(same_bivector("pi1 = covered algebroid pi1", red.pi1, c1, pts, tol, seed));
        for (int i = 1; i <= 3; ++i) {
            for (int j = i + 1; j <= 3; ++j) {
                for (const Multivector* p : {&red.pi0, &red.pi1}) {
                    CheckResult c = involution_residual(*p, hamiltonian(t.pn.n, i), hamiltonian(t.pn.n, j), pts, tol, seed);
                    c.check = "involution " + p->label() + " {h_" + std::to_string(i) + ",h_" + std::to_string(j) + "}";
                    r.add(c);
                }
            }
        }
        return r;
    };
    return e;
}

Example toda_extended_example(int n)
{
    const TodaFlaschka ext = toda_extended_flaschka(n);
    Example e;
    e.name = "toda-extended-" + std::to_string(n);
    e.algebroid = ext.pi0.algebroid();
    e.pi = ext.pi0;
    e.extra = [ext](int points, std::uint64_t seed, double tol) {
        Report r("toda extended");
        const std::vector<Point> pts = sample_points(ext.pi0.algebroid()->domain(), points, seed);
        r.append(is_poisson(ext.pi1, pts, tol, seed));
        const Multivector s01 = schouten(ext.pi0, ext.pi1);
        r.add(max_residual("schouten[pi0,pi1]", pts, tol, seed, [&](const Point& x) { return skew::max_value(s01.eval(x, 0)); }));
        r.append(involution_check(ext, pts, std::min(tol, 1e-12), seed));
        return r;
    };
    return e;
}

Example tangent_example(int k)
{
    std::vector<std::string> coords;
    for (int u = 1; u <= k; ++u) {
        coords.push_back("x" + std::to_string(u));
    }
    Example e;
    e.name = "tangent-" + std::to_string(k);
    e.algebroid = LieAlgebroid::tangent(coords, Domain(static_cast<std::size_t>(k), Interval{-1.0, 1.0}), e.name);
    return e;
}

Example lie_algebra_example()
{
    Example e;
    e.name = "lie-algebra";
    e.algebroid = LieAlgebroid::lie_algebra({"e1", "e2"}, {{{0, 1}, {0.0, 1.0}}}, e.name);
    return e;
}

} // namespace

std::vector<std::string> example_names()
{
    return {"tangent-K", "lie-algebra", "toda-physical-N", "toda-flaschka-N", "toda-extended-N", "toda-algebroid-N"};
}

Example make_example(const std::string& name)
{
    static const std::regex pattern(R"(^(tangent|toda-physical|toda-flaschka|toda-extended|toda-algebroid)-([0-9]+)$)");
    if (name == "lie-algebra") {
        return lie_algebra_example();
    }
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) {
        throw ConfigError("unknown example \"" + name + "\"");
    }
    const std::string kind = m[1];
    const int size = parse_size(m[2], name);
    if (kind == "tangent") {
        if (size < 1 || size > kMaxRank) {
            throw ConfigError("tangent-K needs 1 <= K <= " + std::to_string(kMaxRank));
        }
        return tangent_example(size);
    }
    if (size < 2 || size > kMaxToda) {
        throw ConfigError("Toda examples need 2 <= N <= " + std::to_string(kMaxToda));
    }
    if (kind == "toda-physical") {
        return toda_physical_example(size);
    }
    if (kind == "toda-flaschka") {
        return toda_flaschka_example(size);
    }
    if (kind == "toda-extended") {
        return toda_extended_example(size);
    }
    return toda_algebroid_example(size);
}

namespace {

using nlohmann::json;

ScalarField field_at(const json& j, const std::vector<std::string>& coords, const std::string& where)
{
    std::string text;
    if (j.is_string()) {
        text = j.get<std::string>();
    } else if (j.is_number()) {
        std::ostringstream s;
        s.precision(17);
        s << j.get<double>();
        text = s.str();
    } else {
        throw ConfigError(where + ": expected an expression string");
    }
    try {
        return ScalarField::parse(text, coords);
    } catch (const ParseError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

std::pair<int, int> index_pair(const std::string& key, int rank, const std::string& where)
{
    static const std::regex pattern(R"(^\s*([0-9]+)\s*,\s*([0-9]+)\s*$)");
    std::smatch m;
    if (!std::regex_match(key, m, pattern)) {
        throw ConfigError(where + ": key \"" + key + "\" is not of the form \"i,j\"");
    }
    const int i = std::stoi(m[1]) - 1;
    const int j = std::stoi(m[2]) - 1;
    if (i < 0 || j < 0 || i >= rank || j >= rank) {
        throw ConfigError(where + ": index pair \"" + key + "\" out of range 1.." + std::to_string(rank));
    }
    if (i == j) {
        throw ConfigError(where + ": index pair \"" + key + "\" repeats an index");
    }
    return {i, j};
}

std::vector<std::string> string_list(const json& j, const char* key)
{
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing field \"") + key + "\"");
    }
    if (!j[key].is_array()) {
        throw ConfigError(std::string("field \"") + key + "\" must be an array of strings");
    }
    std::vector<std::string> out;
    for (const json& s : j[key]) {
        if (!s.is_string()) {
            throw ConfigError(std::string("field \"") + key + "\" must be an array of strings");
        }
        out.push_back(s.get<std::string>());
    }
    return out;
}

Domain parse_domain(const json& j, const std::vector<std::string>& coords, const char* key)
{
    if (!j.is_object()) {
        throw ConfigError(std::string("field \"") + key + "\" must be an object");
    }
    Domain d;
    for (const std::string& c : coords) {
        if (!j.contains(c)) {
            throw ConfigError(std::string(key) + ": no interval for coordinate \"" + c + "\"");
        }
        const json& iv = j[c];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
            throw ConfigError(std::string(key) + "." + c + ": expected [lo, hi]");
        }
        const Interval interval{iv[0].get<double>(), iv[1].get<double>()};
        if (!(interval.lo <= interval.hi)) {
            throw ConfigError(std::string(key) + "." + c + ": empty interval");
        }
        d.push_back(interval);
    }
    for (const auto& [k, v] : j.items()) {
        if (std::find(coords.begin(), coords.end(), k) == coords.end()) {
            throw ConfigError(std::string(key) + ": unknown coordinate \"" + k + "\"");
        }
    }
    return d;
}

Example build_config(const json& j, const std::string& origin)
{
    if (!j.is_object()) {
        throw ConfigError(origin + ": top level must be an object");
    }
    Example e;
    e.name = j.value("name", origin);
    const std::vector<std::string> coords = string_list(j, "coords");
    const std::vector<std::string> frame = string_list(j, "frame");
    const int n = static_cast<int>(coords.size());
    const int r = static_cast<int>(frame.size());
    if (r < 1 || r > kMaxRank) {
        throw ConfigError("frame must have 1.." + std::to_string(kMaxRank) + " elements");
    }

    std::vector<std::vector<ScalarField>> anchor(static_cast<std::size_t>(r),
                                                 std::vector<ScalarField>(static_cast<std::size_t>(n), ScalarField::constant(0.0, n)));
    if (j.contains("anchor")) {
        const json& a = j["anchor"];
        if (!a.is_array() || static_cast<int>(a.size()) != r) {
            throw ConfigError("anchor must have one row per frame element");
        }
        for (int i = 0; i < r; ++i) {
            if (!a[static_cast<std::size_t>(i)].is_array() || static_cast<int>(a[static_cast<std::size_t>(i)].size()) != n) {
                throw ConfigError("anchor row " + std::to_string(i + 1) + " must have one entry per coordinate");
            }
            for (int u = 0; u < n; ++u) {
                anchor[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] =
                    field_at(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)], coords,
                             "anchor[" + std::to_string(i + 1) + "][" + std::to_string(u + 1) + "]");
            }
        }
    } else if (n > 0) {
        throw ConfigError("missing field \"anchor\"");
    }

    LieAlgebroid::StructureMap structure;
    if (j.contains("structure")) {
        if (!j["structure"].is_object()) {
            throw ConfigError("field \"structure\" must be an object");
        }
        for (const auto& [key, value] : j["structure"].items()) {
            const std::string where = "structure[\"" + key + "\"]";
            const auto pair = index_pair(key, r, where);
            if (!value.is_array() || static_cast<int>(value.size()) != r) {
                throw ConfigError(where + ": expected one expression per frame element");
            }
            std::vector<ScalarField> fields;
            for (int k = 0; k < r; ++k) {
                fields.push_back(field_at(value[static_cast<std::size_t>(k)], coords, where + "[" + std::to_string(k + 1) + "]"));
            }
            const std::pair<int, int> ordered = pair.first < pair.second ? pair : std::pair<int, int>{pair.second, pair.first};
            if (structure.count(ordered)) {
                throw ConfigError(where + ": pair given twice");
            }
            if (pair.first > pair.second) {
                for (ScalarField& f : fields) {
                    f = -f;
                }
            }
            structure[ordered] = std::move(fields);
        }
    }
    if (!j.contains("domain")) {
        throw ConfigError("missing field \"domain\"");
    }
    Domain domain = parse_domain(j["domain"], coords, "domain");
    try {
        e.algebroid = LieAlgebroid::from_fields(e.name, coords, frame, structure, anchor, domain);
    } catch (const DimensionError& err) {
        throw ConfigError(err.what());
    }

    if (j.contains("pi")) {
        if (!j["pi"].is_object()) {
            throw ConfigError("field \"pi\" must be an object");
        }
        std::map<std::vector<int>, ScalarField> coeffs;
        for (const auto& [key, value] : j["pi"].items()) {
            const std::string where = "pi[\"" + key + "\"]";
            const auto [i, k] = index_pair(key, r, where);
            std::vector<int> idx{std::min(i, k), std::max(i, k)};
            if (coeffs.count(idx)) {
                throw ConfigError(where + ": pair given twice");
            }
            const ScalarField f = field_at(value, coords, where);
            coeffs[idx] = i < k ? f : -f;
        }
        e.pi = Multivector::from_coefficients(e.algebroid, 2, coeffs);
    }
    if (j.contains("N")) {
        const json& m = j["N"];
        if (!m.is_array() || static_cast<int>(m.size()) != r) {
            throw ConfigError("N must have one row per frame element");
        }
        std::vector<std::vector<ScalarField>> rows;
        for (int i = 0; i < r; ++i) {
            const json& row = m[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != r) {
                throw ConfigError("N row " + std::to_string(i + 1) + " must have one entry per frame element");
            }
            std::vector<ScalarField> fields;
            for (int k = 0; k < r; ++k) {
                fields.push_back(field_at(row[static_cast<std::size_t>(k)], coords,
                                          "N[" + std::to_string(i + 1) + "][" + std::to_string(k + 1) + "]"));
            }
            rows.push_back(std::move(fields));
        }
        e.n = EndomorphismField::from_fields(e.algebroid, rows);
    }
    if (j.contains("det_domain")) {
        e.det_domain = parse_domain(j["det_domain"], coords, "det_domain");
    }
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> known{"name", "coords", "frame", "anchor", "structure", "pi", "N", "domain", "det_domain"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown field \"" + key + "\"");
        }
    }
    if (e.pi && e.n) {
        e.hierarchy = PNStructure(e.name, *e.pi, *e.n);
    }
    return e;
}

} // namespace

Example parse_config(std::string_view json_text, const std::string& origin)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(origin + ": JSON syntax error at byte " + std::to_string(err.byte) + ": " + err.what());
    }
    try {
        return build_config(j, origin);
    } catch (const ConfigError& err) {
        throw ConfigError(origin + ": " + err.what());
    } catch (const json::exception& err) {
        throw ConfigError(origin + ": " + err.what());
    }
}

Example load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file \"" + path + "\"");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

Example resolve_example(const std::string& name_or_path)
{
    if (name_or_path.ends_with(".json")) {
        return load_config(name_or_path);
    }
    return make_example(name_or_path);
}

Report validate_example(const Example& example, const ValidateOptions& options)
{
    if (options.points < 1) {
        throw ConfigError("validate needs at least one point");
    }
    const int np = options.points;
    const std::uint64_t seed = options.seed;
    const double tol = options.tolerance;
    const AlgebroidPtr& a = example.algebroid;
    const std::vector<Point> pts = sample_points(a->domain(), np, seed);
    Report report("validate " + example.name);

    report.append(validate_axioms(a, np, seed, tol));
    report.add(modular_methods_agree(a, pts, tol, seed));
    if (a->dim() > 0) {
        const ScalarField f = exp(ScalarField::coordinate(0, a->dim()));
        report.add(rescale_check(a, f, pts, tol, seed));
    }

    if (example.pi) {
        const Multivector& pi = *example.pi;
        report.append(is_poisson(pi, pts, tol, seed));
        report.append(validate_axioms(dual_algebroid(pi), np, seed, tol));
        if (a->dim() > 0) {
            const ScalarField f = ScalarField::coordinate(0, a->dim());
            const Multivector dd = d_pi(pi, d_pi(pi, Multivector::scalar(a, f)));
            report.add(max_residual("d_pi^2 f", pts, tol, seed, [&](const Point& x) { return skew::max_value(dd.eval(x, 0)); }));
        }
    }
    if (example.n) {
        const EndomorphismField& n = *example.n;
        report.add(torsion_residual(n, pts, tol, seed));
        report.append(validate_axioms(deform(n), np, seed, tol));
        report.add(modular_deformation_check(n, pts, tol, seed));
        for (int m = 2; m <= 5; ++m) {
            report.add(trace_identity(n, m, pts, tol, seed));
        }
        if (example.det_domain) {
            const std::vector<Point> det = sample_points(*example.det_domain, np, seed);
            for (int k = 1; k <= 4; ++k) {
                report.add(nijdet_identity(n, k, det, tol, seed));
            }
        }
    }
    if (const auto pn = example.pn()) {
        report.append(compatibility(pn->pi, pn->n, pts, tol, seed));
        report.append(pairwise_compatibility(*pn, 2, pts, tol, seed));
        report.add(pn_modular_dual_check(pn->pi, pn->n, pts, tol, seed));
        report.add(pn_modular_cocycle_check(pn->pi, pn->n, pts, tol, seed));
        if (example.det_domain) {
            const std::vector<Point> det = sample_points(*example.det_domain, np, seed);
            report.add(pn_modular_coboundary_check(pn->pi, pn->n, det, tol, seed));
            for (int m = -1; m <= 5; ++m) {
                report.append(hierarchy_check(*pn, m, IndexRange{-2, 4}, det, tol, seed));
            }
        } else {
            for (int m = 1; m <= 5; ++m) {
                report.append(hierarchy_check(*pn, m, IndexRange{0, 4}, IndexRange{1, 4}, pts, tol, seed));
            }
        }
        for (int m = 1; m <= 4; ++m) {
            report.add(hierarchy_step_check(*pn, m, pts, tol, seed));
        }
        if (a->dim() > 0) {
            report.append(covered_hierarchy_check(*pn, 2, IndexRange{0, 2}, IndexRange{1, 2}, 2, pts, tol, seed));
            report.append(involution_check(*pn, 3, 2, pts, tol, seed));
        }
    }
    if (example.extra) {
        report.append(example.extra(np, seed, tol));
    }
    return report;
}

} // namespace pncalc
