#include "pncalc/poisson.hpp"

#include <cmath>

#include "pncalc/cartan.hpp"
#include "pncalc/nijenhuis.hpp"

namespace pncalc {

JetMatrix bivector_matrix(int rank, std::span<const Jet> table)
{
    const SubsetIndex& idx = SubsetIndex::get(rank);
    const Jet z = table.empty() ? Jet() : Jet::zero(table[0].vars(), table[0].order());
    JetMatrix m(static_cast<std::size_t>(rank), static_cast<std::size_t>(rank), z);
    const auto masks = idx.masks(2);
    for (std::size_t a = 0; a < masks.size(); ++a) {
        const std::vector<int> ij = SubsetIndex::indices_of(masks[a]);
        const auto i = static_cast<std::size_t>(ij[0]);
        const auto j = static_cast<std::size_t>(ij[1]);
        m(i, j) = table[a];
        m(j, i) = -table[a];
    }
    return m;
}

std::vector<Jet> bivector_table(const JetMatrix& m)
{
    const int rank = static_cast<int>(m.rows());
    const auto masks = SubsetIndex::get(rank).masks(2);
    std::vector<Jet> out;
    out.reserve(masks.size());
    for (std::uint32_t mask : masks) {
        const std::vector<int> ij = SubsetIndex::indices_of(mask);
        out.push_back(m(static_cast<std::size_t>(ij[0]), static_cast<std::size_t>(ij[1])));
    }
    return out;
}

namespace {

void require_bivector(const Multivector& pi, const char* what)
{
    if (pi.degree() != 2) {
        throw DimensionError(std::string(what) + " needs a bivector, got degree " + std::to_string(pi.degree()));
    }
}

} // namespace

Multivector sharp(const Multivector& pi, const AForm& alpha)
{
    require_bivector(pi, "sharp");
    require_same(pi.algebroid(), alpha.algebroid(), "sharp");
    if (alpha.degree() != 1) {
        throw DimensionError("sharp needs a 1-form");
    }
    return interior(alpha, pi);
}

ScalarField poisson_bracket(const Multivector& pi, const ScalarField& f, const ScalarField& g)
{
    require_bivector(pi, "poisson_bracket");
    const AlgebroidPtr& a = pi.algebroid();
    return interior(differential(a, g), interior(differential(a, f), pi)).as_scalar();
}

Report is_poisson(const Multivector& pi, std::span<const Point> points, double tolerance, std::uint64_t seed)
{
    require_bivector(pi, "is_poisson");
    Report report("poisson: " + (pi.label().empty() ? pi.algebroid()->name() : pi.label()));
    const Multivector jacobi = schouten(pi, pi);
    report.add(max_residual("schouten[pi,pi]", points, tolerance, seed,
                            [&](const Point& x) { return skew::max_value(jacobi.eval(x, 0)); }));

    const Multivector covered = covered_poisson(pi);
    const int n = pi.algebroid()->dim();
    report.add(max_residual("jacobiator", points, tolerance, seed, [&](const Point& x) {
        if (n < 3) {
            return 0.0;
        }
        const JetMatrix p = bivector_matrix(n, covered.eval(x, 1));
        auto P = [&](int u, int v) -> const Jet& { return p(static_cast<std::size_t>(u), static_cast<std::size_t>(v)); };
        double worst = 0.0;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                for (int w = v + 1; w < n; ++w) {
                    // {x_u, {x_v, x_w}} + cyclic = sum_s P^{us} d_s P^{vw} + cyclic.
                    double j = 0.0;
                    for (int s = 0; s < n; ++s) {
                        j += P(u, s).value() * P(v, w).gradient(s) + P(v, s).value() * P(w, u).gradient(s) +
                             P(w, s).value() * P(u, v).gradient(s);
                    }
                    worst = std::max(worst, std::abs(j));
                    if (std::isnan(j)) {
                        return j;
                    }
                }
            }
        }
        return worst;
    }));
    return report;
}

AlgebroidPtr dual_algebroid(const Multivector& pi, std::string name)
{
    require_bivector(pi, "dual_algebroid");
    const AlgebroidPtr& a = pi.algebroid();
    std::vector<std::string> frame;
    for (const std::string& e : a->frame()) {
        frame.push_back(e + "*");
    }
    if (name.empty()) {
        name = a->name() + "*";
    }
    auto evaluator = [a, pi](std::span<const double> x, int order) {
        const int r = a->rank();
        const int n = a->dim();
        const StructureJets s = a->structure(x, order);
        const JetMatrix hi = bivector_matrix(r, pi.eval(x, order + 1));
        const JetMatrix p = hi.truncated(order);
        auto P = [&](int i, int j) -> const Jet& { return p(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
        StructureJets out = StructureJets::zero(r, n, order);
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                for (int k = 0; k < r; ++k) {
                    Jet c = n > 0 ? cartan::anchor_action(s, k, hi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
                                  : Jet::zero(n, order);
                    for (int b = 0; b < r; ++b) {
                        if (s.C(b, k, j).max_abs() != 0.0) {
                            c -= P(i, b) * s.C(b, k, j);
                        }
                        if (s.C(b, k, i).max_abs() != 0.0) {
                            c += P(j, b) * s.C(b, k, i);
                        }
                    }
                    out.C(i, j, k) = c;
                    out.C(j, i, k) = -c;
                }
            }
            for (int u = 0; u < n; ++u) {
                Jet v = Jet::zero(n, order);
                for (int j = 0; j < r; ++j) {
                    if (s.anchor(j, u).max_abs() != 0.0) {
                        v += P(i, j) * s.anchor(j, u);
                    }
                }
                out.anchor(i, u) = v;
            }
        }
        return out;
    };
    return LieAlgebroid::create(std::move(name), a->coords(), std::move(frame), std::move(evaluator), a->domain());
}

Multivector d_pi(const Multivector& pi, const Multivector& p)
{
    require_bivector(pi, "d_pi");
    return schouten(pi, p);
}

Multivector hierarchy_bivector(const Multivector& pi, const EndomorphismField& n, int k)
{
    require_bivector(pi, "hierarchy_bivector");
    require_same(pi.algebroid(), n.algebroid(), "hierarchy_bivector");
    if (k == 0) {
        return pi;
    }
    const EndomorphismField nk = n.power(k);
    const int r = pi.rank();
    auto evaluator = [pi, nk, r](std::span<const double> x, int order) {
        return bivector_table(bivector_matrix(r, pi.eval(x, order)) * nk.eval(x, order));
    };
    return Multivector(pi.algebroid(), 2, std::move(evaluator), "N^" + std::to_string(k) + " " + pi.label());
}

CheckResult skewness_residual(const Multivector& pi, const EndomorphismField& n, int k, std::span<const Point> points,
                              double tolerance, std::uint64_t seed)
{
    const EndomorphismField nk = n.power(k);
    const int r = pi.rank();
    return max_residual("skewness k=" + std::to_string(k), points, tolerance, seed, [&](const Point& x) {
        const JetMatrix m = bivector_matrix(r, pi.eval(x, 0)) * nk.eval(x, 0);
        double worst = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = i; j < m.cols(); ++j) {
                const double v = std::abs(m(i, j).value() + m(j, i).value());
                if (std::isnan(v)) {
                    return v;
                }
                worst = std::max(worst, v);
            }
        }
        return worst;
    });
}

namespace {

double structure_difference(const StructureJets& a, const StructureJets& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        worst = std::max(worst, std::abs(a.c[i].value() - b.c[i].value()));
    }
    for (std::size_t i = 0; i < a.rho.size(); ++i) {
        worst = std::max(worst, std::abs(a.rho[i].value() - b.rho[i].value()));
    }
    return worst;
}

} // namespace

Report compatibility(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                     double tolerance, std::uint64_t seed)
{
    require_same(pi.algebroid(), n.algebroid(), "compatibility");
    Report report("compatibility: " + pi.algebroid()->name());
    CheckResult a = skewness_residual(pi, n, 1, points, tolerance, seed);
    a.check = "compatibility_skew";
    report.add(a);

    const AlgebroidPtr lhs = dual_algebroid(hierarchy_bivector(pi, n, 1));
    const AlgebroidPtr dual = dual_algebroid(pi);
    const AlgebroidPtr rhs = deform(n.transpose_on(dual));
    report.add(max_residual("compatibility_bracket", points, tolerance, seed, [&](const Point& x) {
        return structure_difference(lhs->structure(x, 0), rhs->structure(x, 0));
    }));
    return report;
}

Multivector covered_poisson(const Multivector& pi)
{
    require_bivector(pi, "covered_poisson");
    const AlgebroidPtr& a = pi.algebroid();
    const AlgebroidPtr base = a->base_tangent();
    auto evaluator = [a, pi](std::span<const double> x, int order) {
        const int r = a->rank();
        const int n = a->dim();
        const StructureJets s = a->structure(x, order);
        const JetMatrix p = bivector_matrix(r, pi.eval(x, order));
        JetMatrix rho(static_cast<std::size_t>(r), static_cast<std::size_t>(n), Jet::zero(n, order));
        for (int i = 0; i < r; ++i) {
            for (int u = 0; u < n; ++u) {
                rho(static_cast<std::size_t>(i), static_cast<std::size_t>(u)) = s.anchor(i, u);
            }
        }
        if (n < 2) {
            return std::vector<Jet>(SubsetIndex::get(std::max(n, 1)).count(2), Jet::zero(n, order));
        }
        return bivector_table(rho.transposed() * p * rho);
    };
    if (a.get() == base.get()) {
        return pi;
    }
    return Multivector(base, 2, std::move(evaluator), "covered " + pi.label());
}

Multivector anchor_image(const Multivector& x)
{
    if (x.degree() != 1) {
        throw DimensionError("anchor_image needs a section");
    }
    const AlgebroidPtr& a = x.algebroid();
    const AlgebroidPtr base = a->base_tangent();
    if (a.get() == base.get()) {
        return x;
    }
    auto evaluator = [a, x](std::span<const double> p, int order) {
        const StructureJets s = a->structure(p, order);
        const std::vector<Jet> v = x.eval(p, order);
        std::vector<Jet> out(static_cast<std::size_t>(a->dim()), Jet::zero(a->dim(), order));
        for (int i = 0; i < a->rank(); ++i) {
            for (int u = 0; u < a->dim(); ++u) {
                out[static_cast<std::size_t>(u)] += v[static_cast<std::size_t>(i)] * s.anchor(i, u);
            }
        }
        return out;
    };
    return Multivector(base, 1, std::move(evaluator), "rho " + x.label());
}

Multivector hamiltonian_vf(const Multivector& pi, const ScalarField& f)
{
    return sharp(pi, differential(pi.algebroid(), f));
}

EndomorphismField recursion_operator(const Multivector& pi0, const Multivector& pi1)
{
    require_bivector(pi0, "recursion_operator");
    require_bivector(pi1, "recursion_operator");
    require_same(pi0.algebroid(), pi1.algebroid(), "recursion_operator");
    const int r = pi0.rank();
    auto evaluator = [pi0, pi1, r](std::span<const double> x, int order) {
        return jet_linear_solve(bivector_matrix(r, pi0.eval(x, order)), bivector_matrix(r, pi1.eval(x, order))).x;
    };
    return EndomorphismField(pi0.algebroid(), std::move(evaluator), "N");
}

Report fiber_linear_bracket_check(const Multivector& x, const Multivector& y, int points, std::uint64_t seed,
                                  double tolerance)
{
    require_same(x.algebroid(), y.algebroid(), "fiber_linear_bracket_check");
    if (x.degree() != 1 || y.degree() != 1) {
        throw DimensionError("fiber_linear_bracket_check needs sections");
    }
    const AlgebroidPtr& a = x.algebroid();
    const int r = a->rank();
    const int n = a->dim();
    Domain total = a->domain();
    total.insert(total.end(), static_cast<std::size_t>(r), Interval{-1.0, 1.0});
    const std::vector<Point> samples = sample_points(total, points, seed);
    const Multivector xy = section_bracket(x, y);

    // A linear function F = sum_i F^i(x) xi_i is described by its coefficient
    // jets; its gradient is (sum_i dF^i/dx^u xi_i, F^i).
    struct Gradient {
        std::vector<double> dx;
        std::vector<double> dxi;
    };
    auto linear = [&](const std::vector<Jet>& coeffs, std::span<const double> xi) {
        Gradient g{std::vector<double>(static_cast<std::size_t>(n), 0.0), std::vector<double>(static_cast<std::size_t>(r), 0.0)};
        for (int i = 0; i < r; ++i) {
            g.dxi[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(i)].value();
            for (int u = 0; u < n; ++u) {
                g.dx[static_cast<std::size_t>(u)] += coeffs[static_cast<std::size_t>(i)].gradient(u) * xi[static_cast<std::size_t>(i)];
            }
        }
        return g;
    };
    auto bracket = [&](const StructureJets& s, std::span<const double> xi, const Gradient& f, const Gradient& g) {
        double v = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                for (int k = 0; k < r; ++k) {
                    v += f.dxi[static_cast<std::size_t>(i)] * g.dxi[static_cast<std::size_t>(j)] * s.C(i, j, k).value() *
                         xi[static_cast<std::size_t>(k)];
                }
            }
            for (int u = 0; u < n; ++u) {
                v += s.anchor(i, u).value() * (f.dxi[static_cast<std::size_t>(i)] * g.dx[static_cast<std::size_t>(u)] -
                                               g.dxi[static_cast<std::size_t>(i)] * f.dx[static_cast<std::size_t>(u)]);
            }
        }
        return v;
    };
    auto split = [n](const Point& p) {
        return std::pair<std::span<const double>, std::span<const double>>{std::span<const double>(p).first(static_cast<std::size_t>(n)),
                                                                           std::span<const double>(p).subspan(static_cast<std::size_t>(n))};
    };

    Report report("fiber-linear bracket: " + a->name());
    report.add(max_residual("linear_homomorphism", samples, tolerance, seed, [&](const Point& p) {
        const auto [base, xi] = split(p);
        const StructureJets s = a->structure(base, 0);
        const double lhs = bracket(s, xi, linear(x.eval(base, 1), xi), linear(y.eval(base, 1), xi));
        const std::vector<Jet> z = xy.eval(base, 0);
        double rhs = 0.0;
        for (int k = 0; k < r; ++k) {
            rhs += z[static_cast<std::size_t>(k)].value() * xi[static_cast<std::size_t>(k)];
        }
        return std::abs(lhs - rhs);
    }));
    auto basic = [&](int u) {
        return Gradient{[&] {
                            std::vector<double> d(static_cast<std::size_t>(n), 0.0);
                            d[static_cast<std::size_t>(u)] = 1.0;
                            return d;
                        }(),
                        std::vector<double>(static_cast<std::size_t>(r), 0.0)};
    };
    report.add(max_residual("q_related", samples, tolerance, seed, [&](const Point& p) {
        const auto [base, xi] = split(p);
        const StructureJets s = a->structure(base, 0);
        const std::vector<Jet> xs = x.eval(base, 1);
        const Gradient fx = linear(xs, xi);
        double worst = 0.0;
        for (int u = 0; u < n; ++u) {
            // X_F(x^u) = {F, x^u} = rho(X)^u.
            double rx = 0.0;
            for (int i = 0; i < r; ++i) {
                rx += xs[static_cast<std::size_t>(i)].value() * s.anchor(i, u).value();
            }
            worst = std::max(worst, std::abs(bracket(s, xi, fx, basic(u)) - rx));
        }
        return worst;
    }));
    report.add(max_residual("basic_commute", samples, tolerance, seed, [&](const Point& p) {
        const auto [base, xi] = split(p);
        const StructureJets s = a->structure(base, 0);
        double worst = 0.0;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                worst = std::max(worst, std::abs(bracket(s, xi, basic(u), basic(v))));
            }
        }
        return worst;
    }));
    return report;
}

Report PNStructure::check(std::span<const Point> points, double tolerance, std::uint64_t seed) const
{
    Report report("pn structure: " + (name.empty() ? algebroid()->name() : name));
    report.append(is_poisson(pi, points, tolerance, seed));
    report.add(torsion_residual(n, points, tolerance, seed));
    report.append(compatibility(pi, n, points, tolerance, seed));
    checked_ = report.pass();
    return report;
}

} // namespace pncalc
