#include "pncalc/modular.hpp"

#include <cmath>

#include "pncalc/cartan.hpp"
#include "pncalc/nijenhuis.hpp"
#include "pncalc/poisson.hpp"

namespace pncalc {

namespace {

Jet divergence(const StructureJets& s, int j)
{
    const int order = s.c.empty() ? 0 : s.c[0].order();
    Jet d = Jet::zero(s.vars, order > 0 ? order - 1 : 0);
    for (int u = 0; u < s.vars; ++u) {
        if (s.anchor(j, u).max_abs() != 0.0) {
            d += s.anchor(j, u).partial(u);
        }
    }
    return d;
}

// Coefficient of e_1 ^ .. ^ e_r in [e_j, f eta] at order K, with s and f at
// order K + 1.
Jet top_bracket(const StructureJets& s, int j, const Jet& f, int order)
{
    const int r = s.rank;
    std::vector<Jet> ej(static_cast<std::size_t>(r), Jet::zero(s.vars, order + 1));
    ej[static_cast<std::size_t>(j)] = Jet::constant(1.0, s.vars, order + 1);
    const std::vector<Jet> eta{f};
    StructureJets s0 = s;
    for (Jet& c : s0.c) {
        c = c.truncated(order);
    }
    for (Jet& a : s0.rho) {
        a = a.truncated(order);
    }
    return cartan::schouten(s0, 1, ej, r, eta)[0].truncated(order);
}

} // namespace

AForm modular_form(const AlgebroidPtr& algebroid, ModularMethod method)
{
    const AlgebroidPtr a = algebroid;
    if (method == ModularMethod::Local) {
        auto evaluator = [a](std::span<const double> x, int order) {
            const StructureJets s = a->structure(x, order + 1);
            const int r = s.rank;
            std::vector<Jet> out;
            for (int j = 0; j < r; ++j) {
                Jet v = divergence(s, j);
                for (int k = 0; k < r; ++k) {
                    v += s.C(j, k, k).truncated(order);
                }
                out.push_back(v.truncated(order));
            }
            return out;
        };
        return AForm(a, 1, std::move(evaluator), "xi " + a->name());
    }
    auto evaluator = [a](std::span<const double> x, int order) {
        const StructureJets s = a->structure(x, order + 1);
        const Jet one = Jet::constant(1.0, s.vars, order + 1);
        std::vector<Jet> out;
        for (int j = 0; j < s.rank; ++j) {
            out.push_back((top_bracket(s, j, one, order) + divergence(s, j)).truncated(order));
        }
        return out;
    };
    return AForm(a, 1, std::move(evaluator), "xi " + a->name());
}

namespace {

double form_gap(const std::vector<Jet>& a, const std::vector<Jet>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = std::abs(a[i].value() - b[i].value());
        if (std::isnan(v)) {
            return v;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

} // namespace

CheckResult modular_methods_agree(const AlgebroidPtr& algebroid, std::span<const Point> points, double tolerance,
                                  std::uint64_t seed)
{
    const AForm local = modular_form(algebroid, ModularMethod::Local);
    const AForm def = modular_form(algebroid, ModularMethod::Definition);
    return max_residual("modular_local_vs_definition", points, tolerance, seed,
                        [&](const Point& x) { return form_gap(local.eval(x, 0), def.eval(x, 0)); });
}

AForm rescaled_modular_form(const AlgebroidPtr& algebroid, const ScalarField& f)
{
    const AlgebroidPtr a = algebroid;
    auto evaluator = [a, f](std::span<const double> x, int order) {
        const StructureJets s = a->structure(x, order + 1);
        const Jet fj = f.eval(x, order + 1);
        const Jet inv = reciprocal(fj.truncated(order));
        std::vector<Jet> out;
        for (int j = 0; j < s.rank; ++j) {
            out.push_back((top_bracket(s, j, fj, order) * inv + divergence(s, j)).truncated(order));
        }
        return out;
    };
    return AForm(a, 1, std::move(evaluator), "xi' " + a->name());
}

CheckResult rescale_check(const AlgebroidPtr& algebroid, const ScalarField& f, std::span<const Point> points,
                          double tolerance, std::uint64_t seed)
{
    for (const Point& x : points) {
        if (!(f.value(x) > 0.0)) {
            throw SingularPointError("rescale_check needs f > 0 on the sample points");
        }
    }
    const AForm lhs = rescaled_modular_form(algebroid, f);
    const AForm rhs = modular_form(algebroid, ModularMethod::Definition) + differential(algebroid, log(f));
    return max_residual("rescale " + f.label(), points, tolerance, seed,
                        [&](const Point& x) { return form_gap(lhs.eval(x, 0), rhs.eval(x, 0)); });
}

AForm relative_modular_rep(const EndomorphismField& n)
{
    return differential(n.algebroid(), n.trace());
}

CheckResult modular_deformation_check(const EndomorphismField& n, std::span<const Point> points, double tolerance,
                                      std::uint64_t seed)
{
    const AlgebroidPtr& a = n.algebroid();
    const AForm xi_n = modular_form(deform(n), ModularMethod::Definition);
    const AForm rhs = n.dual_apply(modular_form(a, ModularMethod::Definition)) + relative_modular_rep(n);
    return max_residual("modular_deformation", points, tolerance, seed,
                        [&](const Point& x) { return form_gap(xi_n.eval(x, 0), rhs.eval(x, 0)); });
}

Multivector pn_modular_vector_field(const Multivector& pi, const EndomorphismField& n)
{
    require_same(pi.algebroid(), n.algebroid(), "pn_modular_vector_field");
    return d_pi(pi, Multivector::scalar(pi.algebroid(), n.trace()));
}

CheckResult pn_modular_dual_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                  double tolerance, std::uint64_t seed)
{
    const AlgebroidPtr dual = dual_algebroid(pi);
    const EndomorphismField nt = n.transpose_on(dual);
    const AForm lhs = modular_form(deform(nt), ModularMethod::Definition);
    const AForm rhs = nt.dual_apply(modular_form(dual, ModularMethod::Definition));
    const Multivector x_np = pn_modular_vector_field(pi, n);
    return max_residual("pn_modular_dual", points, tolerance, seed, [&](const Point& x) {
        const std::vector<Jet> l = lhs.eval(x, 0);
        const std::vector<Jet> r = rhs.eval(x, 0);
        const std::vector<Jet> v = x_np.eval(x, 0);
        double worst = 0.0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            worst = std::max(worst, std::abs(l[i].value() - r[i].value() - v[i].value()));
        }
        return worst;
    });
}

CheckResult pn_modular_cocycle_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                     double tolerance, std::uint64_t seed)
{
    const Multivector z = d_pi(hierarchy_bivector(pi, n, 1), pn_modular_vector_field(pi, n));
    return max_residual("pn_modular_cocycle", points, tolerance, seed,
                        [&](const Point& x) { return skew::max_value(z.eval(x, 0)); });
}

CheckResult pn_modular_coboundary_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                        double tolerance, std::uint64_t seed)
{
    const Multivector lhs = pn_modular_vector_field(pi, n);
    const Multivector rhs = d_pi(hierarchy_bivector(pi, n, 1), Multivector::scalar(pi.algebroid(), log(n.det())));
    return max_residual("pn_modular_coboundary", points, tolerance, seed,
                        [&](const Point& x) { return form_gap(lhs.eval(x, 0), rhs.eval(x, 0)); });
}

} // namespace pncalc
