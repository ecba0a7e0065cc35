#include "doctest.h"

#include "support.hpp"

#include "pncalc/hierarchy.hpp"
#include "pncalc/nijenhuis.hpp"
#include "pncalc/toda.hpp"

using namespace pncalc;
using namespace testing;

TEST_CASE("Toda constructors need n >= 2")
{
    CHECK_THROWS_AS(toda_physical(1), DimensionError);
    CHECK_THROWS_AS(toda_algebroid(1), DimensionError);
    CHECK_THROWS_AS(toda_extended_flaschka(0), DimensionError);
    CHECK_THROWS_AS(toda_flaschka_reduced(1), DimensionError);
}

TEST_CASE("physical Toda tensors at the origin")
{
    const TodaPhysical t = toda_physical(2);
    const Point origin(4, 0.0);
    // q1 q2 p1 p2
    CHECK(t.pi1.coefficient({0, 1}).value(origin) == -1.0);
    CHECK(t.pi1.coefficient({0, 2}).value(origin) == 0.0);
    CHECK(t.pi1.coefficient({1, 3}).value(origin) == 0.0);
    CHECK(t.pi1.coefficient({2, 3}).value(origin) == doctest::Approx(-1.0));
    CHECK(t.pi1.coefficient({0, 3}).value(origin) == 0.0);
    const Point x{0.2, -0.1, 0.7, 0.4};
    CHECK(t.pi1.coefficient({0, 2}).value(x) == doctest::Approx(0.7));
    CHECK(t.pi1.coefficient({2, 3}).value(x) == doctest::Approx(-std::exp(0.3)));

    // M = Pi0^-1 Pi1 with Pi0 canonical.
    const std::vector<double> m = t.pn.n.eval(origin, 0).values();
    const std::vector<double> want{0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0};
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(m[i] == doctest::Approx(want[i]));
    }
}

TEST_CASE("physical Toda is bi-Hamiltonian")
{
    for (int n : {2, 3}) {
        const TodaPhysical t = toda_physical(n);
        const AlgebroidPtr& a = t.pn.algebroid();
        const Multivector lhs = sharp(t.pn.pi, differential(a, t.hamiltonian));
        const Multivector rhs = sharp(t.pi1, differential(a, t.momentum));
        for (const Point& p : sample_points(a->domain(), 20)) {
            CHECK(difference(lhs, rhs, p) < 1e-12);
        }
        CHECK(torsion_residual(t.pn.n, sample_points(a->domain(), 20)).pass);
        CHECK(t.pn.check(sample_points(a->domain(), 20)).pass());
    }
}

TEST_CASE("multi-Hamiltonian identity needs the factor one half")
{
    const TodaPhysical t2 = toda_physical(2);
    const TodaPhysical t3 = toda_physical(3);
    const std::vector<Point> p2 = sample_points(toda_physical_det_domain(2), 20);
    const std::vector<Point> p3 = sample_points(toda_physical_det_domain(3), 20);
    CHECK(toda_multi_check(t2, 0, p2).pass);
    CHECK(toda_multi_check(t3, 1, p3).pass);
    const CheckResult bad = toda_multi_check(t2, 0, p2, 1.0);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("extended Flaschka tensors")
{
    for (int n : {2, 3}) {
        const TodaFlaschka ext = toda_extended_flaschka(n);
        const AlgebroidPtr& a = ext.pi0.algebroid();
        const std::vector<Point> pts = sample_points(a->domain(), 50);
        CHECK(is_poisson(ext.pi0, pts).pass());
        CHECK(is_poisson(ext.pi1, pts).pass());
        const Report inv = involution_check(ext, pts);
        CHECK(inv.pass());
        CHECK(inv.max_residual() < 1e-12);

        // a_n = 0 is a Poisson submanifold: every bracket with a_n vanishes there.
        Point x = pts[0];
        x[static_cast<std::size_t>(n - 1)] = 0.0;
        for (int u = 0; u < 2 * n; ++u) {
            if (u != n - 1) {
                CHECK(ext.pi0.coefficient({n - 1, u}).value(x) == 0.0);
                CHECK(ext.pi1.coefficient({n - 1, u}).value(x) == 0.0);
            }
        }
        // pi0 degenerates on a_n = 0, so N only exists off it.
        CHECK_THROWS_AS(extended_invariance_defect(ext, x), SingularPointError);
        CHECK(std::abs(extended_invariance_defect(ext, pts[1])) > 1e-3);

        // The literal bracket lists are not Poisson.
        const TodaFlaschka lit = toda_extended_flaschka_literal(n);
        CHECK_FALSE(is_poisson(lit.pi1, pts).pass());
    }
}

TEST_CASE("reduced Flaschka tensors")
{
    const TodaFlaschka red = toda_flaschka_reduced(2);
    const Point x{0.8, 0.3, -0.2};
    CHECK(red.pi0.coefficient({0, 1}).value(x) == doctest::Approx(0.8));
    CHECK(red.pi0.coefficient({0, 2}).value(x) == doctest::Approx(-0.8));
    CHECK(red.pi0.coefficient({1, 2}).value(x) == 0.0);
    for (int n : {2, 3, 4}) {
        const TodaFlaschka r = toda_flaschka_reduced(n);
        const std::vector<Point> pts = sample_points(r.pi0.algebroid()->domain(), 20);
        CHECK(is_poisson(r.pi0, pts).pass());
        CHECK(is_poisson(r.pi1, pts).pass());
        CHECK(r.pi0.algebroid()->name() == "toda-flaschka-" + std::to_string(n));
        for (const Point& p : pts) {
            CHECK(bivector_rank(r.pi0, p) == 2 * n - 2);
        }
    }
}

TEST_CASE("Toda algebroid covers the reduced tensors")
{
    for (int n : {2, 3}) {
        const TodaAlgebroid t = toda_algebroid(n);
        const TodaFlaschka red = toda_flaschka_reduced(n);
        const Multivector c0 = covered_poisson(t.pn.pi);
        const Multivector c1 = covered_poisson(t.pi1);
        const Multivector r0 = red.pi0.rebind<MultivectorTag>(c0.algebroid());
        const Multivector r1 = red.pi1.rebind<MultivectorTag>(c1.algebroid());
        for (const Point& p : sample_points(t.pn.algebroid()->domain(), 50)) {
            CHECK(difference(c0, r0, p) < 1e-10);
            CHECK(difference(c1, r1, p) < 1e-10);
        }
        const Report ax = validate_axioms(t.pn.algebroid(), 20);
        CHECK(ax.max_residual() < 1e-12);
        CHECK(t.pn.check(sample_points(t.pn.algebroid()->domain(), 20)).pass());
    }
}

TEST_CASE("traces agree between the physical and algebroid forms")
{
    for (int n : {2, 3}) {
        const TodaPhysical phys = toda_physical(n);
        const TodaAlgebroid alg = toda_algebroid(n);
        for (const Point& x : sample_points(phys.pn.algebroid()->domain(), 20)) {
            const Point y = flaschka_point(x);
            for (int k = 1; k <= 4; ++k) {
                CHECK(alg.pn.n.power(k).trace().value(y) ==
                      doctest::Approx(phys.pn.n.power(k).trace().value(x)).epsilon(1e-10));
            }
            CHECK(0.5 * alg.pn.n.power(2).trace().value(y) ==
                  doctest::Approx(2.0 * phys.hamiltonian.value(x)).epsilon(1e-10));
        }
    }
}
