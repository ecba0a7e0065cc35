#include "pncalc/cartan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace pncalc {

namespace cartan {

namespace {

int structure_order(const StructureJets& s)
{
    return s.c.empty() ? 0 : s.c[0].order();
}

int min_order(std::span<const Jet> t, int fallback)
{
    int o = fallback;
    for (const Jet& j : t) {
        o = std::min(o, j.order());
    }
    return o;
}

int result_order(const StructureJets& s, int input_order)
{
    const int o = std::min(structure_order(s), input_order - 1);
    return s.vars == 0 ? std::max(o, 0) : o;
}

struct NonzeroC {
    int a;
    int b;
    int c;
    const Jet* value;
};

std::vector<NonzeroC> nonzero_structure(const StructureJets& s)
{
    std::vector<NonzeroC> out;
    for (int a = 0; a < s.rank; ++a) {
        for (int b = 0; b < s.rank; ++b) {
            for (int c = 0; c < s.rank; ++c) {
                const Jet& v = s.C(a, b, c);
                if (v.max_abs() != 0.0) {
                    out.push_back({a, b, c, &v});
                }
            }
        }
    }
    return out;
}

// rho_i(t_L) for every frame index i and entry L.
std::vector<std::vector<Jet>> anchor_table(const StructureJets& s, std::span<const Jet> t, int order)
{
    std::vector<std::vector<Jet>> out(static_cast<std::size_t>(s.rank));
    for (int i = 0; i < s.rank; ++i) {
        auto& row = out[static_cast<std::size_t>(i)];
        row.reserve(t.size());
        for (const Jet& j : t) {
            if (j.max_abs() == 0.0 || s.vars == 0) {
                row.push_back(Jet::zero(s.vars, order));
            } else {
                row.push_back(anchor_action(s, i, j).truncated(order));
            }
        }
    }
    return out;
}

void add_signed(Jet& slot, int sign, const Jet& term)
{
    if (sign > 0) {
        slot += term;
    } else {
        slot -= term;
    }
}

int position(std::uint32_t mask, int bit)
{
    return std::popcount(mask & ((1u << bit) - 1u));
}

} // namespace

Jet anchor_action(const StructureJets& s, int i, const Jet& f)
{
    const int order = result_order(s, f.order());
    Jet out = Jet::zero(s.vars, order);
    if (s.vars == 0) {
        return out;
    }
    for (int u = 0; u < s.vars; ++u) {
        const Jet& r = s.anchor(i, u);
        if (r.max_abs() == 0.0) {
            continue;
        }
        out += r * f.partial(u);
    }
    return out;
}

std::vector<Jet> bracket(const StructureJets& s, std::span<const Jet> x, std::span<const Jet> y)
{
    const int r = s.rank;
    const int order = result_order(s, std::min(min_order(x, 64), min_order(y, 64)));
    std::vector<Jet> out = skew::zeros(static_cast<std::size_t>(r), s.vars, order);
    for (const NonzeroC& e : nonzero_structure(s)) {
        const Jet& xi = x[static_cast<std::size_t>(e.a)];
        const Jet& yj = y[static_cast<std::size_t>(e.b)];
        if (xi.max_abs() == 0.0 || yj.max_abs() == 0.0) {
            continue;
        }
        out[static_cast<std::size_t>(e.c)] += xi * yj * *e.value;
    }
    if (s.vars == 0) {
        return out;
    }
    for (int i = 0; i < r; ++i) {
        const Jet& xi = x[static_cast<std::size_t>(i)];
        const Jet& yi = y[static_cast<std::size_t>(i)];
        for (int k = 0; k < r; ++k) {
            const Jet& xk = x[static_cast<std::size_t>(k)];
            const Jet& yk = y[static_cast<std::size_t>(k)];
            if (xi.max_abs() != 0.0 && yk.max_abs() != 0.0) {
                out[static_cast<std::size_t>(k)] += xi * anchor_action(s, i, yk);
            }
            if (yi.max_abs() != 0.0 && xk.max_abs() != 0.0) {
                out[static_cast<std::size_t>(k)] -= yi * anchor_action(s, i, xk);
            }
        }
    }
    return out;
}

std::vector<Jet> differential(const StructureJets& s, int k, std::span<const Jet> w)
{
    const SubsetIndex& idx = SubsetIndex::get(s.rank);
    const int order = result_order(s, min_order(w, 64));
    std::vector<Jet> out = skew::zeros(idx.count(k + 1), s.vars, order);
    if (out.empty()) {
        return out;
    }
    const auto rho_w = anchor_table(s, w, order);
    const auto cs = nonzero_structure(s);
    const auto masks = idx.masks(k + 1);
    for (std::size_t o = 0; o < masks.size(); ++o) {
        const std::uint32_t m = masks[o];
        const std::vector<int> e = SubsetIndex::indices_of(m);
        Jet& slot = out[o];
        for (std::size_t a = 0; a < e.size(); ++a) {
            const std::size_t l = idx.index(m & ~(1u << e[a]));
            add_signed(slot, (a & 1u) ? -1 : 1, rho_w[static_cast<std::size_t>(e[a])][l]);
        }
        for (const NonzeroC& c : cs) {
            if (c.a >= c.b || !(m >> c.a & 1u) || !(m >> c.b & 1u)) {
                continue;
            }
            const std::uint32_t rest = m & ~(1u << c.a) & ~(1u << c.b);
            if (rest >> c.c & 1u) {
                continue;
            }
            const int pa = position(m, c.a);
            const int pb = position(m, c.b);
            const int sign = ((pa + pb) & 1 ? -1 : 1) * skew::sign_before(rest, c.c);
            add_signed(slot, sign, *c.value * w[idx.index(rest | (1u << c.c))]);
        }
    }
    return out;
}

std::vector<Jet> schouten(const StructureJets& s, int p, std::span<const Jet> lhs, int q, std::span<const Jet> rhs)
{
    const SubsetIndex& idx = SubsetIndex::get(s.rank);
    const int order = result_order(s, std::min(min_order(lhs, 64), min_order(rhs, 64)));
    std::vector<Jet> out = skew::zeros(idx.count(p + q - 1), s.vars, order);
    if (out.empty()) {
        return out;
    }
    const auto pm = idx.masks(p);
    const auto qm = idx.masks(q);

    // f g [e_I, e_J]
    if (p >= 1 && q >= 1) {
        const auto cs = nonzero_structure(s);
        if (!cs.empty()) {
            for (std::size_t a = 0; a < pm.size(); ++a) {
                if (lhs[a].max_abs() == 0.0) {
                    continue;
                }
                for (std::size_t b = 0; b < qm.size(); ++b) {
                    if (rhs[b].max_abs() == 0.0) {
                        continue;
                    }
                    const Jet fg = (lhs[a] * rhs[b]).truncated(order);
                    for (const NonzeroC& c : cs) {
                        if (!(pm[a] >> c.a & 1u) || !(qm[b] >> c.b & 1u)) {
                            continue;
                        }
                        const std::uint32_t ia = pm[a] & ~(1u << c.a);
                        const std::uint32_t jb = qm[b] & ~(1u << c.b);
                        const int s1 = skew::wedge_sign(ia, jb);
                        const std::uint32_t u = ia | jb;
                        if (s1 == 0 || (u >> c.c & 1u)) {
                            continue;
                        }
                        const int parity = (position(pm[a], c.a) + position(qm[b], c.b)) & 1;
                        const int sign = (parity ? -1 : 1) * s1 * skew::sign_before(u, c.c);
                        add_signed(out[idx.index(u | (1u << c.c))], sign, *c.value * fg);
                    }
                }
            }
        }
    }
    if (s.vars == 0) {
        return out;
    }

    // f [e_I, g] ^ e_J with [e_I, g] = (-1)^(p-1) sum_a (-1)^a rho_{i_a}(g) e_{I\a}
    if (p >= 1) {
        const auto rho_q = anchor_table(s, rhs, order);
        const int outer = (p - 1) & 1 ? -1 : 1;
        for (std::size_t a = 0; a < pm.size(); ++a) {
            if (lhs[a].max_abs() == 0.0) {
                continue;
            }
            for (int i : SubsetIndex::indices_of(pm[a])) {
                const std::uint32_t ia = pm[a] & ~(1u << i);
                const int inner = position(pm[a], i) & 1 ? -1 : 1;
                for (std::size_t b = 0; b < qm.size(); ++b) {
                    const Jet& g = rho_q[static_cast<std::size_t>(i)][b];
                    const int s1 = skew::wedge_sign(ia, qm[b]);
                    if (s1 == 0 || g.max_abs() == 0.0) {
                        continue;
                    }
                    add_signed(out[idx.index(ia | qm[b])], outer * inner * s1, lhs[a] * g);
                }
            }
        }
    }

    // -(-1)^((p-1)(q-1)) g [e_J, f] ^ e_I
    if (q >= 1) {
        const auto rho_p = anchor_table(s, lhs, order);
        const int outer = -((((p - 1) * (q - 1)) & 1) ? -1 : 1) * (((q - 1) & 1) ? -1 : 1);
        for (std::size_t b = 0; b < qm.size(); ++b) {
            if (rhs[b].max_abs() == 0.0) {
                continue;
            }
            for (int j : SubsetIndex::indices_of(qm[b])) {
                const std::uint32_t jb = qm[b] & ~(1u << j);
                const int inner = position(qm[b], j) & 1 ? -1 : 1;
                for (std::size_t a = 0; a < pm.size(); ++a) {
                    const Jet& f = rho_p[static_cast<std::size_t>(j)][a];
                    const int s1 = skew::wedge_sign(jb, pm[a]);
                    if (s1 == 0 || f.max_abs() == 0.0) {
                        continue;
                    }
                    add_signed(out[idx.index(jb | pm[a])], outer * inner * s1, rhs[b] * f);
                }
            }
        }
    }
    return out;
}

} // namespace cartan

Multivector section_bracket(const Multivector& x, const Multivector& y)
{
    require_same(x.algebroid(), y.algebroid(), "section_bracket");
    if (x.degree() != 1 || y.degree() != 1) {
        throw DimensionError("section_bracket takes sections (degree 1)");
    }
    AlgebroidPtr a = x.algebroid();
    return Multivector(a, 1, [a, x, y](std::span<const double> pt, int order) {
        const StructureJets s = a->structure(pt, order);
        return cartan::bracket(s, x.eval(pt, order + 1), y.eval(pt, order + 1));
    });
}

ScalarField anchor_action(const Multivector& x, const ScalarField& f)
{
    if (x.degree() != 1) {
        throw DimensionError("anchor_action takes a section");
    }
    AlgebroidPtr a = x.algebroid();
    return ScalarField(
        a->dim(),
        [a, x, f](std::span<const double> pt, int order) {
            const StructureJets s = a->structure(pt, order);
            const std::vector<Jet> xv = x.eval(pt, order);
            const Jet fj = f.eval(pt, order + 1);
            Jet out = Jet::zero(a->dim(), order);
            for (int i = 0; i < a->rank(); ++i) {
                out += xv[static_cast<std::size_t>(i)] * cartan::anchor_action(s, i, fj);
            }
            return out;
        },
        "rho(X)" + f.label());
}

AForm differential(const AForm& w)
{
    AlgebroidPtr a = w.algebroid();
    const int k = w.degree();
    return AForm(a, k + 1, [a, w, k](std::span<const double> pt, int order) {
        const StructureJets s = a->structure(pt, order);
        return cartan::differential(s, k, w.eval(pt, order + 1));
    });
}

AForm differential(const AlgebroidPtr& algebroid, const ScalarField& f)
{
    return differential(AForm::scalar(algebroid, f));
}

AForm lie_derivative(const Multivector& x, const AForm& w)
{
    require_same(x.algebroid(), w.algebroid(), "lie_derivative");
    if (x.degree() != 1) {
        throw DimensionError("lie_derivative takes a section");
    }
    if (w.degree() == 0) {
        return interior(x, differential(w));
    }
    return differential(interior(x, w)) + interior(x, differential(w));
}

Multivector schouten(const Multivector& lhs, const Multivector& rhs)
{
    require_same(lhs.algebroid(), rhs.algebroid(), "schouten");
    AlgebroidPtr a = lhs.algebroid();
    const int p = lhs.degree();
    const int q = rhs.degree();
    if (p + q == 0) {
        return Multivector::zero(a, 0);
    }
    return Multivector(a, p + q - 1, [a, lhs, rhs, p, q](std::span<const double> pt, int order) {
        const StructureJets s = a->structure(pt, order);
        return cartan::schouten(s, p, lhs.eval(pt, order + 1), q, rhs.eval(pt, order + 1));
    });
}

namespace {

std::vector<Jet> unit(int rank, int i, int vars, int order)
{
    std::vector<Jet> t = skew::zeros(static_cast<std::size_t>(rank), vars, order);
    t[static_cast<std::size_t>(i)] = Jet::constant(1.0, vars, order);
    return t;
}

double max_abs_diff(std::span<const Jet> a, std::span<const Jet> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].value() - b[i].value()));
    }
    return m;
}

// Nonlinear test functions for the Leibniz rule.
std::vector<Jet> leibniz_functions(std::span<const double> x, int order)
{
    const int n = static_cast<int>(x.size());
    std::vector<Jet> out;
    if (n == 0) {
        out.push_back(Jet::constant(2.0, 0, order));
        return out;
    }
    Jet mix = Jet::constant(0.5, n, order);
    for (int u = 0; u < n; ++u) {
        const Jet xu = Jet::variable(u, x[static_cast<std::size_t>(u)], n, order);
        out.push_back(xu);
        mix += (0.3 + 0.1 * u) * xu;
    }
    out.push_back(sin(mix) * exp(0.5 * mix));
    return out;
}

} // namespace

Report validate_axioms(const AlgebroidPtr& algebroid, int points, std::uint64_t seed, double tolerance)
{
    const int r = algebroid->rank();
    const int n = algebroid->dim();
    const std::vector<Point> pts = sample_points(algebroid->domain(), points, seed);
    Report report("axioms: " + algebroid->name());

    report.add(max_residual("jacobi", pts, tolerance, seed, [&](const Point& x) {
        const StructureJets s = algebroid->structure(x, 2);
        double m = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                for (int k = j + 1; k < r; ++k) {
                    const auto ei = unit(r, i, n, 2);
                    const auto ej = unit(r, j, n, 2);
                    const auto ek = unit(r, k, n, 2);
                    const auto t1 = cartan::bracket(s, ei, cartan::bracket(s, ej, ek));
                    const auto t2 = cartan::bracket(s, ej, cartan::bracket(s, ek, ei));
                    const auto t3 = cartan::bracket(s, ek, cartan::bracket(s, ei, ej));
                    for (int l = 0; l < r; ++l) {
                        const auto L = static_cast<std::size_t>(l);
                        m = std::max(m, std::abs(t1[L].value() + t2[L].value() + t3[L].value()));
                    }
                }
            }
        }
        return m;
    }));

    report.add(max_residual("anchor_homomorphism", pts, tolerance, seed, [&](const Point& x) {
        const StructureJets s = algebroid->structure(x, 1);
        double m = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                for (int u = 0; u < n; ++u) {
                    double lhs = 0.0;
                    for (int k = 0; k < r; ++k) {
                        lhs += s.C(i, j, k).value() * s.anchor(k, u).value();
                    }
                    const double rhs = cartan::anchor_action(s, i, s.anchor(j, u)).value() -
                                       cartan::anchor_action(s, j, s.anchor(i, u)).value();
                    m = std::max(m, std::abs(lhs - rhs));
                }
            }
        }
        return m;
    }));

    report.add(max_residual("leibniz", pts, tolerance, seed, [&](const Point& x) {
        const StructureJets s = algebroid->structure(x, 1);
        double m = 0.0;
        for (const Jet& f : leibniz_functions(x, 1)) {
            for (int i = 0; i < r; ++i) {
                const auto ei = unit(r, i, n, 1);
                const Jet rho_f = cartan::anchor_action(s, i, f);
                for (int j = 0; j < r; ++j) {
                    std::vector<Jet> fej = unit(r, j, n, 1);
                    fej[static_cast<std::size_t>(j)] = f;
                    const auto lhs = cartan::bracket(s, ei, fej);
                    auto rhs = cartan::bracket(s, ei, unit(r, j, n, 1));
                    for (Jet& c : rhs) {
                        c *= f;
                    }
                    rhs[static_cast<std::size_t>(j)] += rho_f;
                    m = std::max(m, max_abs_diff(lhs, rhs));
                }
            }
        }
        return m;
    }));
    return report;
}

} // namespace pncalc
