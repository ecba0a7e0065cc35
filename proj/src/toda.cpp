#include "pncalc/toda.hpp"

#include <cmath>
#include <map>

#include "pncalc/cartan.hpp"
#include "pncalc/hierarchy.hpp"

namespace pncalc {

namespace {

void require_size(int n)
{
    if (n < 2) {
        throw DimensionError("Toda lattice needs n >= 2, got " + std::to_string(n));
    }
}

using Entries = std::map<std::pair<int, int>, ScalarField>;

void put(Entries& e, int u, int v, const ScalarField& f)
{
    if (u > v) {
        e[{v, u}] = -f;
    } else {
        e[{u, v}] = f;
    }
}

Multivector bivector_from(const AlgebroidPtr& a, const Entries& entries, std::string label)
{
    std::map<std::vector<int>, ScalarField> coeffs;
    for (const auto& [uv, f] : entries) {
        coeffs[{uv.first, uv.second}] = f;
    }
    Multivector pi = Multivector::from_coefficients(a, 2, coeffs);
    return Multivector(a, 2, [pi](std::span<const double> x, int order) { return pi.eval(x, order); },
                       std::move(label));
}

std::vector<std::string> names(const char* stem, int from, int to)
{
    std::vector<std::string> out;
    for (int i = from; i <= to; ++i) {
        out.push_back(std::string(stem) + std::to_string(i));
    }
    return out;
}

} // namespace

TodaPhysical toda_physical(int n)
{
    require_size(n);
    std::vector<std::string> coords = names("q", 1, n);
    const std::vector<std::string> ps = names("p", 1, n);
    coords.insert(coords.end(), ps.begin(), ps.end());
    const int dim = 2 * n;
    const AlgebroidPtr a = LieAlgebroid::tangent(coords, Domain(static_cast<std::size_t>(dim), Interval{-1.0, 1.0}),
                                                 "toda-physical-" + std::to_string(n));
    auto q = [&](int i) { return ScalarField::coordinate(i, dim, coords[static_cast<std::size_t>(i)]); };
    auto p = [&](int i) { return ScalarField::coordinate(n + i, dim, coords[static_cast<std::size_t>(n + i)]); };
    auto one = ScalarField::constant(1.0, dim);

    Entries e0;
    Entries e1;
    for (int i = 0; i < n; ++i) {
        put(e0, i, n + i, one);
        put(e1, i, n + i, p(i));
        for (int j = i + 1; j < n; ++j) {
            put(e1, i, j, ScalarField::constant(-1.0, dim));
        }
        if (i + 1 < n) {
            put(e1, n + i, n + i + 1, -exp(q(i) - q(i + 1)));
        }
    }
    const Multivector pi0 = bivector_from(a, e0, "pi0");
    const Multivector pi1 = bivector_from(a, e1, "pi1");

    ScalarField h = ScalarField::constant(0.0, dim);
    ScalarField m = ScalarField::constant(0.0, dim);
    for (int i = 0; i < n; ++i) {
        h = h + 0.5 * (p(i) * p(i));
        m = m + p(i);
        if (i + 1 < n) {
            h = h + exp(q(i) - q(i + 1));
        }
    }
    return TodaPhysical{n, PNStructure{a->name(), pi0, recursion_operator(pi0, pi1)}, pi1, h, m};
}

Domain toda_physical_det_domain(int n)
{
    Domain d(static_cast<std::size_t>(n), Interval{-0.1, 0.1});
    d.insert(d.end(), static_cast<std::size_t>(n), Interval{2.0, 2.5});
    return d;
}

CheckResult toda_multi_check(const TodaPhysical& toda, int j, std::span<const Point> points, double log_factor,
                             double tolerance, std::uint64_t seed)
{
    const AlgebroidPtr& a = toda.pn.algebroid();
    const ScalarField h0 = log_factor * hamiltonian(toda.pn.n, 0);
    const Multivector lhs = sharp(hierarchy_bivector(toda.pn.pi, toda.pn.n, j), differential(a, toda.hamiltonian));
    const Multivector rhs = sharp(hierarchy_bivector(toda.pn.pi, toda.pn.n, j + 2), differential(a, h0));
    return max_residual("toda_multi j=" + std::to_string(j), points, tolerance, seed, [&](const Point& x) {
        const std::vector<Jet> l = lhs.eval(x, 0);
        const std::vector<Jet> r = rhs.eval(x, 0);
        double worst = 0.0;
        for (std::size_t k = 0; k < l.size(); ++k) {
            worst = std::max(worst, std::abs(l[k].value() - r[k].value()));
        }
        return worst;
    });
}

namespace {

TodaFlaschka extended(int n, bool literal)
{
    require_size(n);
    std::vector<std::string> coords = names("a", 1, n);
    const std::vector<std::string> bs = names("b", 1, n);
    coords.insert(coords.end(), bs.begin(), bs.end());
    const int dim = 2 * n;
    Domain domain(static_cast<std::size_t>(n), Interval{0.2, 2.0});
    domain.insert(domain.end(), static_cast<std::size_t>(n), Interval{-1.0, 1.0});
    const AlgebroidPtr alg = LieAlgebroid::tangent(
        coords, domain, std::string(literal ? "toda-extended-literal-" : "toda-extended-") + std::to_string(n));
    auto A = [&](int i) { return ScalarField::coordinate(i, dim, coords[static_cast<std::size_t>(i)]); };
    auto B = [&](int i) { return ScalarField::coordinate(n + i, dim, coords[static_cast<std::size_t>(n + i)]); };
    const int last = n - 1;

    Entries e0;
    Entries e1;
    for (int i = 0; i < last; ++i) {
        put(e0, i, n + i, A(i));
        put(e0, i, n + i + 1, -A(i));
        put(e1, i, i + 1, -(A(i) * A(i + 1)));
        put(e1, i, n + i, A(i) * B(i));
        put(e1, i, n + i + 1, -(A(i) * B(i + 1)));
        put(e1, n + i, n + i + 1, -A(i));
    }
    if (literal) {
        put(e0, last, n + last, ScalarField::constant(1.0, dim));
        put(e1, last, n + last, B(last));
    } else {
        put(e0, last, n + last, A(last));
        put(e1, last, n + last, A(last) * B(last));
    }
    return TodaFlaschka{n, bivector_from(alg, e0, "pi0"), bivector_from(alg, e1, "pi1")};
}

// Keeps the multi-indices that do not involve variable `drop`.
Jet restrict_jet(const Jet& j, int drop)
{
    const int vars = j.vars() - 1;
    Jet out = Jet::zero(vars, j.order());
    const JetShape& small = out.shape();
    const JetShape& big = j.shape();
    std::vector<int> alpha(static_cast<std::size_t>(j.vars()));
    auto coeffs = out.coefficients();
    for (std::size_t idx = 0; idx < small.size(); ++idx) {
        const auto e = small.exponent(idx);
        for (int u = 0, w = 0; u < j.vars(); ++u) {
            alpha[static_cast<std::size_t>(u)] = (u == drop) ? 0 : e[static_cast<std::size_t>(w++)];
        }
        coeffs[idx] = j[big.index_of(alpha)];
    }
    return out;
}

Multivector restrict_and_delete(const Multivector& pi, const AlgebroidPtr& reduced, int drop)
{
    const int big = pi.rank();
    auto evaluator = [pi, big, drop](std::span<const double> x, int order) {
        Point full(x.begin(), x.end());
        full.insert(full.begin() + drop, 0.0);
        const JetMatrix m = bivector_matrix(big, pi.eval(full, order));
        JetMatrix out(static_cast<std::size_t>(big - 1), static_cast<std::size_t>(big - 1), Jet::zero(big - 1, order));
        for (int u = 0, ru = 0; u < big; ++u) {
            if (u == drop) {
                continue;
            }
            for (int v = 0, rv = 0; v < big; ++v) {
                if (v == drop) {
                    continue;
                }
                out(static_cast<std::size_t>(ru), static_cast<std::size_t>(rv)) =
                    restrict_jet(m(static_cast<std::size_t>(u), static_cast<std::size_t>(v)), drop);
                ++rv;
            }
            ++ru;
        }
        return bivector_table(out);
    };
    return Multivector(reduced, 2, std::move(evaluator), "reduced " + pi.label());
}

} // namespace

TodaFlaschka toda_extended_flaschka(int n)
{
    return extended(n, false);
}

TodaFlaschka toda_extended_flaschka_literal(int n)
{
    return extended(n, true);
}

Report involution_check(const TodaFlaschka& ext, std::span<const Point> points, double tolerance, std::uint64_t seed)
{
    const int an = ext.n - 1;
    const int dim = 2 * ext.n;
    Report report("involution phi: " + ext.pi0.algebroid()->name());
    for (const Multivector* pi : {&ext.pi0, &ext.pi1}) {
        report.add(max_residual("phi_pushforward " + pi->label(), points, tolerance, seed, [&](const Point& x) {
            Point y = x;
            y[static_cast<std::size_t>(an)] = -y[static_cast<std::size_t>(an)];
            const JetMatrix px = bivector_matrix(dim, pi->eval(x, 0));
            const JetMatrix py = bivector_matrix(dim, pi->eval(y, 0));
            double worst = 0.0;
            for (int u = 0; u < dim; ++u) {
                for (int v = 0; v < dim; ++v) {
                    const double s = ((u == an) != (v == an)) ? -1.0 : 1.0;
                    worst = std::max(worst, std::abs(s * px(static_cast<std::size_t>(u), static_cast<std::size_t>(v)).value() -
                                                     py(static_cast<std::size_t>(u), static_cast<std::size_t>(v)).value()));
                }
            }
            return worst;
        }));
    }
    return report;
}

double extended_invariance_defect(const TodaFlaschka& ext, std::span<const double> point)
{
    const EndomorphismField nn = recursion_operator(ext.pi0, ext.pi1);
    const JetMatrix m = nn.eval(point, 0);
    const int an = ext.n - 1;
    // Image of sum_{u != a_n} d/dx^u: its a_n component is sum_u M[u][a_n].
    double c = 0.0;
    for (int u = 0; u < 2 * ext.n; ++u) {
        if (u != an) {
            c += m(static_cast<std::size_t>(u), static_cast<std::size_t>(an)).value();
        }
    }
    return c;
}

TodaFlaschka toda_flaschka_reduced(int n)
{
    const TodaFlaschka ext = toda_extended_flaschka(n);
    std::vector<std::string> coords = names("a", 1, n - 1);
    const std::vector<std::string> bs = names("b", 1, n);
    coords.insert(coords.end(), bs.begin(), bs.end());
    Domain domain(static_cast<std::size_t>(n - 1), Interval{0.2, 2.0});
    domain.insert(domain.end(), static_cast<std::size_t>(n), Interval{-1.0, 1.0});
    const AlgebroidPtr alg = LieAlgebroid::tangent(coords, domain, "toda-flaschka-" + std::to_string(n));
    return TodaFlaschka{n, restrict_and_delete(ext.pi0, alg, n - 1), restrict_and_delete(ext.pi1, alg, n - 1)};
}

int bivector_rank(const Multivector& pi, std::span<const double> point)
{
    return numeric_rank(bivector_matrix(pi.rank(), pi.eval(point, 0)));
}

TodaAlgebroid toda_algebroid(int n)
{
    require_size(n);
    std::vector<std::string> coords = names("a", 1, n - 1);
    const std::vector<std::string> bs = names("b", 1, n);
    coords.insert(coords.end(), bs.begin(), bs.end());
    std::vector<std::string> frame = names("e", 1, n);
    const std::vector<std::string> fs = names("f", 1, n);
    frame.insert(frame.end(), fs.begin(), fs.end());
    const int dim = 2 * n - 1;
    const int r = 2 * n;
    Domain domain(static_cast<std::size_t>(n - 1), Interval{0.2, 2.0});
    domain.insert(domain.end(), static_cast<std::size_t>(n), Interval{-1.0, 1.0});

    // rho(e_i) = d/da_i (i < n), rho(e_n) = 0, rho(f_i) = d/db_i.
    std::vector<std::vector<ScalarField>> anchor(static_cast<std::size_t>(r),
                                                 std::vector<ScalarField>(static_cast<std::size_t>(dim), ScalarField::constant(0.0, dim)));
    for (int i = 0; i < n - 1; ++i) {
        anchor[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = ScalarField::constant(1.0, dim);
    }
    for (int i = 0; i < n; ++i) {
        anchor[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n - 1 + i)] = ScalarField::constant(1.0, dim);
    }
    const AlgebroidPtr alg =
        LieAlgebroid::from_fields("toda-algebroid-" + std::to_string(n), coords, frame, {}, anchor, domain);

    auto A = [&](int i) { return ScalarField::coordinate(i, dim, coords[static_cast<std::size_t>(i)]); };
    auto B = [&](int i) { return ScalarField::coordinate(n - 1 + i, dim, coords[static_cast<std::size_t>(n - 1 + i)]); };
    auto E = [](int i) { return i; };
    auto F = [n](int i) { return n + i; };
    const ScalarField one = ScalarField::constant(1.0, dim);

    Entries e0;
    Entries e1;
    for (int i = 0; i < n - 1; ++i) {
        put(e0, E(i), F(i), A(i));
        put(e0, E(i), F(i + 1), -A(i));
        put(e1, E(i), F(i), A(i) * B(i));
        put(e1, E(i), F(i + 1), -(A(i) * B(i + 1)));
        put(e1, F(i), F(i + 1), -A(i));
        if (i + 1 < n - 1) {
            put(e1, E(i), E(i + 1), -(A(i) * A(i + 1)));
        }
    }
    put(e0, E(n - 1), F(n - 1), one);
    put(e1, E(n - 2), E(n - 1), -A(n - 2));
    put(e1, E(n - 1), F(n - 1), B(n - 1));

    const Multivector pi0 = bivector_from(alg, e0, "pi0");
    const Multivector pi1 = bivector_from(alg, e1, "pi1");
    return TodaAlgebroid{n, PNStructure{alg->name(), pi0, recursion_operator(pi0, pi1)}, pi1};
}

Domain toda_algebroid_det_domain(int n)
{
    Domain d(static_cast<std::size_t>(n - 1), Interval{0.2, 1.0});
    d.insert(d.end(), static_cast<std::size_t>(n), Interval{2.0, 2.5});
    return d;
}

Point flaschka_point(std::span<const double> qp)
{
    const std::size_t n = qp.size() / 2;
    Point out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.push_back(std::exp(qp[i] - qp[i + 1]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(qp[n + i]);
    }
    return out;
}

} // namespace pncalc
