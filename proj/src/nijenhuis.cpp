#include "pncalc/nijenhuis.hpp"

#include <cmath>

#include "pncalc/cartan.hpp"

namespace pncalc {

namespace cartan {

StructureJets deformed_structure(const StructureJets& s, const JetMatrix& m)
{
    const int r = s.rank;
    const int n = s.vars;
    const int order = s.c.empty() ? 0 : s.c[0].order();
    StructureJets out = StructureJets::zero(r, n, order);
    const JetMatrix m0 = m.truncated(order);
    auto M = [&](int i, int j) -> const Jet& { return m0(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
    // rho_i(M_jk), needs M one order higher.
    std::vector<Jet> rho_m(static_cast<std::size_t>(r) * r * r, Jet::zero(n, order));
    if (n > 0) {
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                for (int k = 0; k < r; ++k) {
                    rho_m[(static_cast<std::size_t>(i) * r + j) * r + k] =
                        anchor_action(s, i, m(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
                }
            }
        }
    }
    auto RM = [&](int i, int j, int k) -> const Jet& { return rho_m[(static_cast<std::size_t>(i) * r + j) * r + k]; };
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            for (int k = 0; k < r; ++k) {
                Jet c = RM(i, j, k) - RM(j, i, k);
                for (int a = 0; a < r; ++a) {
                    if (s.C(a, j, k).max_abs() != 0.0) {
                        c += M(i, a) * s.C(a, j, k);
                    }
                    if (s.C(i, a, k).max_abs() != 0.0) {
                        c += M(j, a) * s.C(i, a, k);
                    }
                    if (s.C(i, j, a).max_abs() != 0.0) {
                        c -= s.C(i, j, a) * M(a, k);
                    }
                }
                out.C(i, j, k) = c;
                out.C(j, i, k) = -c;
            }
        }
    }
    for (int i = 0; i < r; ++i) {
        for (int u = 0; u < n; ++u) {
            Jet v = Jet::zero(n, order);
            for (int j = 0; j < r; ++j) {
                if (s.anchor(j, u).max_abs() != 0.0) {
                    v += M(i, j) * s.anchor(j, u);
                }
            }
            out.anchor(i, u) = v;
        }
    }
    return out;
}

std::vector<Jet> torsion_table(const StructureJets& s, const JetMatrix& m)
{
    const int r = s.rank;
    const StructureJets d = deformed_structure(s, m);
    const int order = d.c[0].order();
    std::vector<Jet> out(static_cast<std::size_t>(r) * r * r, Jet::zero(s.vars, order));
    for (int i = 0; i < r; ++i) {
        std::vector<Jet> ni(m.cols(), Jet());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            ni[c] = m(static_cast<std::size_t>(i), c);
        }
        for (int j = i + 1; j < r; ++j) {
            std::vector<Jet> nj(m.cols(), Jet());
            for (std::size_t c = 0; c < m.cols(); ++c) {
                nj[c] = m(static_cast<std::size_t>(j), c);
            }
            const std::vector<Jet> b = bracket(s, ni, nj);
            for (int k = 0; k < r; ++k) {
                Jet t = -b[static_cast<std::size_t>(k)].truncated(order);
                for (int l = 0; l < r; ++l) {
                    t += d.C(i, j, l) * m(static_cast<std::size_t>(l), static_cast<std::size_t>(k));
                }
                out[(static_cast<std::size_t>(i) * r + j) * r + k] = t;
                out[(static_cast<std::size_t>(j) * r + i) * r + k] = -t;
            }
        }
    }
    return out;
}

} // namespace cartan

Multivector deformed_bracket(const EndomorphismField& n, const Multivector& x, const Multivector& y)
{
    require_same(n.algebroid(), x.algebroid(), "deformed_bracket");
    return section_bracket(n.apply(x), y) + section_bracket(x, n.apply(y)) - n.apply(section_bracket(x, y));
}

Multivector torsion(const EndomorphismField& n, const Multivector& x, const Multivector& y)
{
    return n.apply(deformed_bracket(n, x, y)) - section_bracket(n.apply(x), n.apply(y));
}

CheckResult torsion_residual(const EndomorphismField& n, std::span<const Point> points, double tolerance,
                             std::uint64_t seed)
{
    const AlgebroidPtr& a = n.algebroid();
    return max_residual("torsion", points, tolerance, seed, [&](const Point& x) {
        const StructureJets s = a->structure(x, 0);
        return skew::max_value(cartan::torsion_table(s, n.eval(x, 1)));
    });
}

AlgebroidPtr deform(const EndomorphismField& n, std::string name)
{
    const AlgebroidPtr& a = n.algebroid();
    if (name.empty()) {
        name = a->name() + "_N";
    }
    auto evaluator = [a, n](std::span<const double> x, int order) {
        return cartan::deformed_structure(a->structure(x, order), n.eval(x, order + 1));
    };
    return LieAlgebroid::create(std::move(name), a->coords(), a->frame(), std::move(evaluator), a->domain());
}

EndomorphismField shift(const EndomorphismField& n, double lambda)
{
    return n.shift(lambda);
}

namespace {

double form_difference(const AForm& lhs, const AForm& rhs, const Point& x)
{
    const std::vector<Jet> a = lhs.eval(x, 0);
    const std::vector<Jet> b = rhs.eval(x, 0);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].value() - b[i].value()));
    }
    return m;
}

} // namespace

CheckResult trace_identity(const EndomorphismField& n, int m, std::span<const Point> points, double tolerance,
                           std::uint64_t seed)
{
    if (m < 1) {
        throw DimensionError("trace_identity needs m >= 1");
    }
    const AlgebroidPtr& a = n.algebroid();
    const AForm lhs = static_cast<double>(m) * n.power(m - 1).dual_apply(differential(a, n.trace()));
    const AForm rhs = differential(a, n.power(m).trace());
    return max_residual("trace_identity m=" + std::to_string(m), points, tolerance, seed,
                        [&](const Point& x) { return form_difference(lhs, rhs, x); });
}

CheckResult nijdet_identity(const EndomorphismField& n, int k, std::span<const Point> points, double tolerance,
                            std::uint64_t seed)
{
    const AlgebroidPtr& a = n.algebroid();
    const AForm lhs = static_cast<double>(k) * n.power(k).dual_apply(differential(a, log(n.det())));
    const AForm rhs = differential(a, n.power(k).trace());
    return max_residual("nijdet_identity k=" + std::to_string(k), points, tolerance, seed,
                        [&](const Point& x) { return form_difference(lhs, rhs, x); });
}

Report trace_identities(const EndomorphismField& n, int m, std::span<const Point> points, double tolerance,
                        std::uint64_t seed)
{
    Report r("trace identities: " + n.algebroid()->name());
    r.add(trace_identity(n, m, points, tolerance, seed));
    r.add(nijdet_identity(n, m, points, tolerance, seed));
    return r;
}

} // namespace pncalc
