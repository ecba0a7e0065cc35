// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pncalc/cartan.hpp"
#include "pncalc/flows.hpp"
#include "pncalc/hierarchy.hpp"
#include "pncalc/modular.hpp"
#include "pncalc/nijenhuis.hpp"
#include "pncalc/poisson.hpp"
#include "pncalc/toda.hpp"

using namespace pncalc;

namespace {

struct Outcome {
    bool pass = true;
    double residual = 0.0;
    std::string note;

    // Records a residual that must stay below the bound.
    void below(double value, double bound, const std::string& what)
    {
        residual = std::max(residual, value);
        if (!(value < bound)) {
            pass = false;
            note += (note.empty() ? "" : "; ") + what;
        }
    }

    void report(const Report& r, double bound)
    {
        below(r.pass() ? r.max_residual() : std::max(r.max_residual(), bound), bound, r.subject());
    }

    void result(const CheckResult& r, double bound)
    {
        below(r.pass ? r.max_residual : std::max(r.max_residual, bound), bound, r.check);
    }
};

double table_gap(const std::vector<Jet>& a, const std::vector<Jet>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].value() - b[i].value()));
    }
    return m;
}

double gap(const Multivector& a, const Multivector& b, const Point& x)
{
    return table_gap(a.eval(x, 0), b.eval(x, 0));
}

double size(const Multivector& a, const Point& x)
{
    return skew::max_value(a.eval(x, 0));
}

double size(const AForm& a, const Point& x)
{
    return skew::max_value(a.eval(x, 0));
}

double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ScalarField random_field(std::mt19937_64& rng, int n)
{
    std::vector<double> c(static_cast<std::size_t>(n) + 3);
    for (double& v : c) {
        v = uniform(rng);
    }
    const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
    return ScalarField(
        n,
        [c, a, n](std::span<const double> x, int order) {
            Jet lin = Jet::constant(c[0], n, order);
            for (int u = 0; u < n; ++u) {
                lin += c[static_cast<std::size_t>(u) + 1] * Jet::variable(u, x[static_cast<std::size_t>(u)], n, order);
            }
            const Jet xa = Jet::variable(a, x[static_cast<std::size_t>(a)], n, order);
            return lin + c[static_cast<std::size_t>(n) + 1] * sin(lin) * xa + c[static_cast<std::size_t>(n) + 2] * exp(0.3 * xa);
        },
        "random");
}

template <class Tag>
SkewField<Tag> random_skew(std::mt19937_64& rng, const AlgebroidPtr& a, int degree)
{
    std::vector<ScalarField> table;
    for (std::size_t i = 0; i < SubsetIndex::get(a->rank()).count(degree); ++i) {
        table.push_back(random_field(rng, a->dim()));
    }
    return SkewField<Tag>::from_table(a, degree, table);
}

Domain cube(int n)
{
    return Domain(static_cast<std::size_t>(n), Interval{-1.0, 1.0});
}

std::vector<std::string> names(const std::string& stem, int n)
{
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) {
        v.push_back(stem + std::to_string(i));
    }
    return v;
}

Outcome criterion_axioms()
{
    Outcome o;
    std::vector<AlgebroidPtr> list;
    for (int k = 2; k <= 4; ++k) {
        list.push_back(LieAlgebroid::tangent(names("x", k), cube(k)));
    }
    list.push_back(LieAlgebroid::lie_algebra({"e1", "e2"}, {{{0, 1}, {0.0, 1.0}}}, "aff1"));
    for (int n : {2, 3}) {
        const TodaAlgebroid alg = toda_algebroid(n);
        const TodaPhysical phys = toda_physical(n);
        list.push_back(alg.pn.algebroid());
        list.push_back(dual_algebroid(alg.pn.pi));
        list.push_back(dual_algebroid(phys.pn.pi));
        list.push_back(deform(phys.pn.n));
    }
    for (const AlgebroidPtr& a : list) {
        o.report(validate_axioms(a, 50), 1e-8);
    }
    return o;
}

Outcome criterion_torsion()
{
    Outcome o;
    for (int n : {2, 3, 4}) {
        const TodaPhysical t = toda_physical(n);
        o.result(torsion_residual(t.pn.n, sample_points(t.pn.algebroid()->domain(), 50)), 1e-8);
    }
    return o;
}

Outcome criterion_poisson_compatibility()
{
    Outcome o;
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        const std::vector<Point> pts = sample_points(t.pn.algebroid()->domain(), 50);
        o.report(pairwise_compatibility(t.pn, 2, pts), 1e-8);
        o.report(compatibility(t.pn.pi, t.pn.n, pts), 1e-8);
    }
    return o;
}

Outcome criterion_modular_deformation()
{
    Outcome o;
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        o.result(modular_deformation_check(t.pn.n, sample_points(t.pn.algebroid()->domain(), 50)), 1e-8);
    }
    const AlgebroidPtr plane = LieAlgebroid::tangent({"q1", "q2"}, cube(2));
    const ScalarField z = ScalarField::constant(0.0, 2);
    const EndomorphismField d = EndomorphismField::from_fields(
        plane, {{ScalarField::coordinate(0, 2, "q1"), z}, {z, ScalarField::constant(1.0, 2)}});
    o.result(modular_deformation_check(d, sample_points(plane->domain(), 50)), 1e-8);
    return o;
}

Outcome criterion_gauge()
{
    Outcome o;
    const AlgebroidPtr a = toda_algebroid(2).pn.algebroid();
    const AlgebroidPtr b = dual_algebroid(toda_physical(2).pi1);
    for (const AlgebroidPtr& alg : {a, b}) {
        const std::string x = alg->coords()[0];
        const std::string y = alg->coords()[1];
        for (const std::string& f : {"exp(" + x + ")", "1 + " + x + "^2", "2 + sin(" + x + "*" + y + ")"}) {
            o.result(rescale_check(alg, ScalarField::parse(f, alg->coords()), sample_points(alg->domain(), 50)), 1e-10);
        }
    }
    return o;
}

Outcome criterion_trace_identities()
{
    Outcome o;
    const TodaPhysical t = toda_physical(3);
    const std::vector<Point> pts = sample_points(t.pn.algebroid()->domain(), 50);
    const std::vector<Point> det = sample_points(toda_physical_det_domain(3), 50);
    for (int m = 2; m <= 5; ++m) {
        o.result(trace_identity(t.pn.n, m, pts), 1e-8);
    }
    for (int k = 1; k <= 4; ++k) {
        o.result(nijdet_identity(t.pn.n, k, det), 1e-8);
    }
    return o;
}

Outcome criterion_hierarchy()
{
    Outcome o;
    const TodaPhysical t = toda_physical(3);
    const std::vector<Point> det = sample_points(toda_physical_det_domain(3), 50);
    for (int m = -1; m <= 5; ++m) {
        o.report(hierarchy_check(t.pn, m, IndexRange{-2, 4}, det), 1e-8);
    }
    for (int m = -1; m <= 4; ++m) {
        o.result(hierarchy_step_check(t.pn, m, det), 1e-12);
    }
    return o;
}

Outcome criterion_multi_hamiltonian()
{
    Outcome o;
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        const std::vector<Point> det = sample_points(toda_physical_det_domain(n), 50);
        for (int j = 0; j <= 1; ++j) {
            o.result(toda_multi_check(t, j, det), 1e-8);
            const CheckResult control = toda_multi_check(t, j, det, 1.0);
            if (control.max_residual <= 1e-3) {
                o.pass = false;
                o.note += "control without 1/2 passed; ";
            }
        }
    }
    return o;
}

Outcome criterion_origin()
{
    Outcome o;
    const TodaPhysical t = toda_physical(2);
    const Point x(4, 0.0);
    const std::vector<double> m = t.pn.n.eval(x, 0).values();
    const std::vector<double> want{0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0};
    for (std::size_t i = 0; i < 16; ++i) {
        o.below(std::abs(m[i] - want[i]), 1e-12, "N(0)");
    }
    o.below(std::abs(t.pn.n.trace().value(x)), 1e-12, "Tr N");
    o.below(std::abs(t.pn.n.power(2).trace().value(x) - 4.0), 1e-12, "Tr N^2");
    o.below(std::abs(t.pn.n.det().value(x) - 1.0), 1e-12, "det N");
    o.below(std::abs(hamiltonian(t.pn.n, 0).value(x)), 1e-12, "h0");
    o.below(std::abs(hamiltonian(t.pn.n, 2).value(x) - 2.0), 1e-12, "h2");
    o.below(std::abs(hamiltonian(t.pn.n, 2).value(x) - 2.0 * t.hamiltonian.value(x)), 1e-12, "factor 2");
    return o;
}

Outcome criterion_covered()
{
    Outcome o;
    for (int n : {2, 3}) {
        const TodaAlgebroid t = toda_algebroid(n);
        const TodaFlaschka red = toda_flaschka_reduced(n);
        const Multivector c0 = covered_poisson(t.pn.pi);
        const Multivector c1 = covered_poisson(t.pi1);
        const Multivector r0 = red.pi0.rebind<MultivectorTag>(c0.algebroid());
        const Multivector r1 = red.pi1.rebind<MultivectorTag>(c1.algebroid());
        for (const Point& p : sample_points(t.pn.algebroid()->domain(), 50)) {
            o.below(gap(c0, r0, p), 1e-10, "covered pi0");
            o.below(gap(c1, r1, p), 1e-10, "covered pi1");
            if (bivector_rank(c0, p) != 2 * n - 2) {
                o.pass = false;
                o.note = "rank of covered pi0";
            }
        }
    }
    return o;
}

Outcome criterion_involution()
{
    Outcome o;
    for (int n : {2, 3}) {
        const TodaFlaschka ext = toda_extended_flaschka(n);
        o.report(involution_check(ext, sample_points(ext.pi0.algebroid()->domain(), 50)), 1e-12);
    }
    return o;
}

Outcome criterion_flows()
{
    Outcome o;
    const TodaAlgebroid alg = toda_algebroid(3);
    const TodaFlaschka red = toda_flaschka_reduced(3);
    const std::map<int, ScalarField> h = hamiltonians(alg.pn.n, IndexRange{1, 3});
    const Point x0{1.0, 0.8, 0.3, -0.1, 0.2};
    const Trajectory a = integrate(hamiltonian_flow_field(red.pi0, h.at(2)), x0, 10.0, 1e-3);
    const Trajectory b = integrate(hamiltonian_flow_field(red.pi1, h.at(1)), x0, 10.0, 1e-3);
    for (const Drift& d : conservation_report(a, {{"h1", h.at(1)}, {"h2", h.at(2)}, {"h3", h.at(3)}})) {
        o.below(d.drift, 1e-6, "drift " + d.name);
    }
    o.below(max_deviation(a, b), 1e-6, "bi-Hamiltonian coincidence");
    std::vector<Point> along;
    for (std::size_t s = 0; s < a.states.size(); s += 250) {
        along.push_back(a.states[s]);
    }
    for (const Multivector* p : {&red.pi0, &red.pi1}) {
        for (int i = 1; i <= 3; ++i) {
            for (int j = i + 1; j <= 3; ++j) {
                o.result(involution_residual(*p, h.at(i), h.at(j), along), 1e-9);
            }
        }
    }
    return o;
}

Outcome criterion_jets()
{
    Outcome o;
    std::mt19937_64 rng(42);
    auto random_jet = [&](int vars, int order) {
        Jet j = Jet::zero(vars, order);
        for (double& c : j.coefficients()) {
            c = uniform(rng);
        }
        return j;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const Jet a = random_jet(3, 3);
        const Jet b = random_jet(3, 3);
        const Jet c = random_jet(3, 3);
        o.below(((a * b) * c - a * (b * c)).max_abs(), 1e-14, "associativity");
        o.below((a * b - b * a).max_abs(), 1e-14, "commutativity");
        o.below((a * (b + c) - (a * b + a * c)).max_abs(), 1e-14, "distributivity");
        o.below((a + b - (b + a)).max_abs(), 1e-14, "addition");
    }

    // exp(sin(x0) x1) + x0 log(2 + x2^2) against central differences.
    auto f = [](std::span<const double> x, int order) {
        const Jet x0 = Jet::variable(0, x[0], 3, order);
        const Jet x1 = Jet::variable(1, x[1], 3, order);
        const Jet x2 = Jet::variable(2, x[2], 3, order);
        return exp(sin(x0) * x1) + x0 * log(2.0 + x2 * x2);
    };
    for (int trial = 0; trial < 20; ++trial) {
        Point x{uniform(rng), uniform(rng), uniform(rng)};
        const Jet j = f(x, 1);
        for (int u = 0; u < 3; ++u) {
            const double h = 1e-6;
            Point xp = x;
            Point xm = x;
            xp[static_cast<std::size_t>(u)] += h;
            xm[static_cast<std::size_t>(u)] -= h;
            const double fd = (f(xp, 0).value() - f(xm, 0).value()) / (2.0 * h);
            o.below(std::abs(j.gradient(u) - fd), 1e-6, "first derivatives");
        }
    }

    // det of a matrix of affine entries a + b.x.
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> coef(9 * 4);
        for (double& c : coef) {
            c = uniform(rng);
        }
        auto det_at = [&](std::span<const double> x, int order) {
            JetMatrix m(3, 3, Jet::zero(3, order));
            for (std::size_t e = 0; e < 9; ++e) {
                Jet v = Jet::constant(coef[e * 4], 3, order);
                for (int u = 0; u < 3; ++u) {
                    v += coef[e * 4 + 1 + static_cast<std::size_t>(u)] * Jet::variable(u, x[static_cast<std::size_t>(u)], 3, order);
                }
                m(e / 3, e % 3) = v;
            }
            return jet_det(m);
        };
        Point x{uniform(rng), uniform(rng), uniform(rng)};
        const Jet d = det_at(x, 1);
        for (int u = 0; u < 3; ++u) {
            const double h = 1e-5;
            Point xp = x;
            Point xm = x;
            xp[static_cast<std::size_t>(u)] += h;
            xm[static_cast<std::size_t>(u)] -= h;
            const double fd = (det_at(xp, 0).value() - det_at(xm, 0).value()) / (2.0 * h);
            o.below(std::abs(d.gradient(u) - fd), 1e-5, "jet_det derivative");
        }
    }
    return o;
}

Outcome criterion_gerstenhaber()
{
    Outcome o;
    const TodaAlgebroid t = toda_algebroid(2);
    const AlgebroidPtr& a = t.pn.algebroid();
    std::mt19937_64 rng(7);
    auto sgn = [](int e) { return (e & 1) ? -1.0 : 1.0; };
    const std::vector<Point> pts = sample_points(a->domain(), 10);
    for (int trial = 0; trial < 12; ++trial) {
        const int p = trial % 3;
        const int q = (trial + 1) % 3;
        const int r = 1 + trial % 2;
        const Multivector P = random_skew<MultivectorTag>(rng, a, p);
        const Multivector Q = random_skew<MultivectorTag>(rng, a, q);
        const Multivector R = random_skew<MultivectorTag>(rng, a, r);
        const Point& x = pts[static_cast<std::size_t>(trial) % pts.size()];
        o.below(size(schouten(P, Q) + sgn((p - 1) * (q - 1)) * schouten(Q, P), x), 1e-9, "super-commutation");
        const Multivector lhs = schouten(P, wedge(Q, R));
        const Multivector rhs = wedge(schouten(P, Q), R) + sgn((p - 1) * q) * wedge(Q, schouten(P, R));
        o.below(gap(lhs, rhs, x), 1e-9, "derivation");
        const Multivector j = sgn((p - 1) * (r - 1)) * schouten(P, schouten(Q, R)) +
                              sgn((q - 1) * (p - 1)) * schouten(Q, schouten(R, P)) +
                              sgn((r - 1) * (q - 1)) * schouten(R, schouten(P, Q));
        o.below(size(j, x), 1e-9, "graded Jacobi");
    }
    for (int k = 0; k <= 2; ++k) {
        const AForm w = random_skew<FormTag>(rng, a, k);
        const AForm dd = differential(differential(w));
        for (const Point& x : pts) {
            o.below(size(dd, x), 1e-10, "d_A^2");
        }
    }
    for (const Multivector* pi : {&t.pn.pi, &t.pi1}) {
        for (int k = 0; k <= 1; ++k) {
            const Multivector P = random_skew<MultivectorTag>(rng, a, k);
            const Multivector dd = d_pi(*pi, d_pi(*pi, P));
            for (const Point& x : pts) {
                o.below(size(dd, x), 1e-10, "d_pi^2");
            }
        }
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"axiom suite on the reference algebroids", criterion_axioms},
        {"torsion of the Toda recursion operator", criterion_torsion},
        {"Poisson and compatibility conditions", criterion_poisson_compatibility},
        {"modular class of the deformed algebroid", criterion_modular_deformation},
        {"modular form under a change of volume", criterion_gauge},
        {"trace and determinant identities", criterion_trace_identities},
        {"hierarchy of Hamiltonian fields", criterion_hierarchy},
        {"multi-Hamiltonian Toda lattice", criterion_multi_hamiltonian},
        {"Toda lattice at the origin", criterion_origin},
        {"covered Poisson structures", criterion_covered},
        {"involution of the extended Flaschka chart", criterion_involution},
        {"conservation along the Toda flow", criterion_flows},
        {"jet arithmetic and derivatives", criterion_jets},
        {"Gerstenhaber identities and d^2 = 0", criterion_gerstenhaber},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [title, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  [%2d] %-45s max residual %.3e%s%s\n", o.pass ? "PASS" : "FAIL", index, title.c_str(),
                    o.residual, o.note.empty() ? "" : "  ", o.note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
