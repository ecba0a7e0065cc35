#include "doctest.h"

#include "support.hpp"

#include "pncalc/nijenhuis.hpp"
#include "pncalc/toda.hpp"

using namespace pncalc;
using namespace testing;

TEST_CASE("deformed bracket of multiples of the identity")
{
    AlgebroidPtr a = frame_algebroid();
    std::mt19937_64 rng(3);
    const Multivector x = random_multivector(rng, a, 1);
    const Multivector y = random_multivector(rng, a, 1);
    const EndomorphismField id = EndomorphismField::identity(a);
    const EndomorphismField c = EndomorphismField::scaled_identity(a, 2.5);
    for (const Point& p : sample_points(a->domain(), 10)) {
        CHECK(difference(deformed_bracket(id, x, y), section_bracket(x, y), p) < 1e-12);
        CHECK(difference(deformed_bracket(c, x, y), 2.5 * section_bracket(x, y), p) < 1e-12);
    }
    CHECK_THROWS_AS(deformed_bracket(id, Multivector::frame(two_dim_lie_algebra(), {0}), y), DimensionError);
}

TEST_CASE("deformed bracket on the Toda lattice against finite differences")
{
    const TodaPhysical t = toda_physical(2);
    const AlgebroidPtr& a = t.pn.algebroid();
    const Multivector x = Multivector::frame(a, {0}); // d/dq1
    const Multivector y = Multivector::frame(a, {2}); // d/dp1
    const std::vector<double> origin(4, 0.0);
    const std::vector<double> got = values_of(deformed_bracket(t.pn.n, x, y).eval(origin, 0));
    // [N d_q1, d_p1] + [d_q1, N d_p1] - N[d_q1, d_p1] = -d_p1(row q1 of N) + d_q1(row p1 of N).
    for (int k = 0; k < 4; ++k) {
        const double lhs = -fd_gradient(t.pn.n.entry(0, k), origin)[2] + fd_gradient(t.pn.n.entry(2, k), origin)[0];
        CHECK(got[static_cast<std::size_t>(k)] == doctest::Approx(lhs).epsilon(1e-7));
    }
}

TEST_CASE("torsion of Toda recursion operators vanishes")
{
    const EndomorphismField id = EndomorphismField::identity(frame_algebroid());
    CHECK(torsion_residual(id, sample_points(frame_algebroid()->domain(), 10)).max_residual < 1e-12);
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        const CheckResult r = torsion_residual(t.pn.n, sample_points(t.pn.algebroid()->domain(), 50));
        CHECK(r.pass);
        CHECK(r.max_residual < 1e-8);
    }
}

TEST_CASE("torsion of a random endomorphism is reported")
{
    AlgebroidPtr a = LieAlgebroid::tangent({"x", "y", "z"}, box(3));
    std::mt19937_64 rng(8);
    const EndomorphismField n = random_endomorphism(rng, a);
    const CheckResult r = torsion_residual(n, sample_points(a->domain(), 20));
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual > 1e-3);

    // Same number from the section-level definition.
    const Point p = sample_points(a->domain(), 1)[0];
    double direct = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            direct = std::max(direct, magnitude(torsion(n, Multivector::frame(a, {i}), Multivector::frame(a, {j})), p));
        }
    }
    CHECK(direct == doctest::Approx(torsion_residual(n, std::vector<Point>{p}).max_residual));
}

TEST_CASE("deformed algebroid")
{
    AlgebroidPtr a = frame_algebroid();
    const std::vector<Point> pts = sample_points(a->domain(), 10);
    const AlgebroidPtr same = deform(EndomorphismField::identity(a));
    const AlgebroidPtr scaled = deform(EndomorphismField::scaled_identity(a, -1.5));
    for (const Point& p : pts) {
        const StructureJets s = a->structure(p, 0);
        CHECK(structure_gap(same->structure(p, 0), s) < 1e-12);
        StructureJets t = s;
        for (Jet& c : t.c) {
            c *= -1.5;
        }
        for (Jet& r : t.rho) {
            r *= -1.5;
        }
        CHECK(structure_gap(scaled->structure(p, 0), t) < 1e-12);
    }
    const TodaPhysical toda = toda_physical(2);
    const Report r = validate_axioms(deform(toda.pn.n), 50);
    CHECK(r.pass());
    CHECK(r.max_residual() < 1e-8);
}

TEST_CASE("shift by a multiple of the identity")
{
    AlgebroidPtr a = LieAlgebroid::tangent({"x", "y", "z"}, box(3));
    std::mt19937_64 rng(21);
    const EndomorphismField n = random_endomorphism(rng, a);
    const Point p{0.2, -0.4, 0.5};
    CHECK(shift(n, 0.0).eval(p, 0).values() == n.eval(p, 0).values());
    const EndomorphismField one = shift(EndomorphismField::scaled_identity(a, 0.0), 1.0);
    CHECK(one.eval(p, 0).values() == EndomorphismField::identity(a).eval(p, 0).values());
    CHECK(torsion_residual(one, std::vector<Point>{p}).max_residual == 0.0);

    for (int trial = 0; trial < 3; ++trial) {
        const double lambda = uniform(rng, -3.0, 3.0);
        const EndomorphismField s = shift(n, lambda);
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const Multivector x = Multivector::frame(a, {i});
                const Multivector y = Multivector::frame(a, {j});
                CHECK(difference(torsion(s, x, y), torsion(n, x, y), p) < 1e-10);
            }
        }
    }

    // diag(q1, 1) degenerates on q1 = 0; the shift by 2 does not.
    AlgebroidPtr t2 = LieAlgebroid::tangent({"q1", "q2"}, box(2));
    const ScalarField q1 = ScalarField::coordinate(0, 2, "q1");
    const EndomorphismField d = EndomorphismField::from_fields(
        t2, {{q1, ScalarField::constant(0.0, 2)}, {ScalarField::constant(0.0, 2), ScalarField::constant(1.0, 2)}});
    const Point z{0.0, 0.3};
    CHECK(d.det().value(z) == 0.0);
    CHECK(shift(d, 2.0).det().value(z) == doctest::Approx(6.0));
}

TEST_CASE("trace identities")
{
    const TodaPhysical t2 = toda_physical(2);
    const std::vector<Point> pts2 = sample_points(toda_physical_det_domain(2), 20);
    CHECK(trace_identity(t2.pn.n, 1, pts2).max_residual == 0.0);

    // N* d ln det N against finite-difference gradients.
    const ScalarField lndet = log(t2.pn.n.det());
    const ScalarField tr = t2.pn.n.trace();
    double worst = 0.0;
    for (const Point& p : pts2) {
        const std::vector<double> g = fd_gradient(lndet, p);
        const std::vector<double> gt = fd_gradient(tr, p);
        const JetMatrix m = t2.pn.n.eval(p, 0);
        for (std::size_t i = 0; i < 4; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                v += m(i, j).value() * g[j];
            }
            worst = std::max(worst, std::abs(v - gt[i]));
        }
    }
    CHECK(worst < 1e-6);
    const CheckResult k1 = nijdet_identity(t2.pn.n, 1, pts2);
    CHECK(k1.max_residual < 1e-9);

    const TodaPhysical t3 = toda_physical(3);
    const std::vector<Point> pts = sample_points(t3.pn.algebroid()->domain(), 20);
    const std::vector<Point> det = sample_points(toda_physical_det_domain(3), 20);
    for (int m = 2; m <= 5; ++m) {
        CHECK(trace_identity(t3.pn.n, m, pts).max_residual < 1e-8);
    }
    for (int k = 2; k <= 4; ++k) {
        CHECK(nijdet_identity(t3.pn.n, k, det).max_residual < 1e-8);
    }
    CHECK(trace_identities(t3.pn.n, 3, det).pass());
    CHECK_THROWS_AS(trace_identity(t3.pn.n, 0, pts), DimensionError);
}

TEST_CASE("the uncorrected exponent fails at m = 1")
{
    // N* d Tr N = d Tr N is false for the Toda operator.
    const TodaPhysical t = toda_physical(2);
    const AlgebroidPtr& a = t.pn.algebroid();
    const AForm lhs = t.pn.n.dual_apply(differential(a, t.pn.n.trace()));
    const AForm rhs = differential(a, t.pn.n.trace());
    double worst = 0.0;
    for (const Point& p : sample_points(a->domain(), 10)) {
        worst = std::max(worst, difference(lhs, rhs, p));
    }
    CHECK(worst > 1e-2);
}

TEST_CASE("nijdet needs a positive determinant")
{
    AlgebroidPtr t2 = LieAlgebroid::tangent({"q1", "q2"}, box(2));
    const ScalarField q1 = ScalarField::coordinate(0, 2, "q1");
    const ScalarField z = ScalarField::constant(0.0, 2);
    const EndomorphismField d = EndomorphismField::from_fields(t2, {{q1, z}, {z, ScalarField::constant(1.0, 2)}});
    CHECK_THROWS_AS(nijdet_identity(d, 1, std::vector<Point>{{-0.5, 0.0}}), SingularPointError);
}

TEST_CASE("N* is a chain map from A to A_N")
{
    const TodaPhysical t = toda_physical(2);
    const AlgebroidPtr& a = t.pn.algebroid();
    const AlgebroidPtr an = deform(t.pn.n);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 3; ++trial) {
        const ScalarField f = random_field(rng, 4);
        const AForm lhs = t.pn.n.dual_apply(differential(a, f));
        const AForm rhs = differential(an, f);
        for (const Point& p : sample_points(a->domain(), 10, 100 + trial)) {
            CHECK(max_gap(lhs.eval(p, 0), rhs.eval(p, 0)) < 1e-10);
        }
    }
}

TEST_CASE("deforming twice by N is deforming once by N^2")
{
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        const AlgebroidPtr an = deform(t.pn.n);
        const AlgebroidPtr twice = deform(t.pn.n.rebind(an));
        const AlgebroidPtr square = deform(t.pn.n.power(2));
        for (const Point& p : sample_points(an->domain(), 10)) {
            CHECK(structure_gap(twice->structure(p, 0), square->structure(p, 0)) < 1e-8);
        }
    }
}
