#include "doctest.h"

#include "support.hpp"

#include "pncalc/hierarchy.hpp"
#include "pncalc/toda.hpp"

using namespace pncalc;
using namespace testing;

TEST_CASE("Hamiltonians of the identity")
{
    const AlgebroidPtr t = LieAlgebroid::tangent({"a", "b", "c", "d"}, box(4));
    const std::map<int, ScalarField> h = hamiltonians(EndomorphismField::identity(t), IndexRange{-2, 4});
    const Point x{0.1, 0.2, 0.3, 0.4};
    CHECK(h.size() == 7);
    CHECK(h.at(0).value(x) == 0.0);
    CHECK(h.at(1).value(x) == 4.0);
    CHECK(h.at(2).value(x) == 2.0);
    CHECK(h.at(4).value(x) == 1.0);
    CHECK(h.at(-2).value(x) == -2.0);
    for (int m = 1; m <= 4; ++m) {
        CHECK(magnitude(hierarchy_field(PNStructure("id", Multivector::frame(t, {0, 2}), EndomorphismField::identity(t)),
                                        m),
                        x) == 0.0);
    }
}

TEST_CASE("Toda Hamiltonians at the origin")
{
    const TodaPhysical toda = toda_physical(2);
    const Point origin(4, 0.0);
    CHECK(hamiltonian(toda.pn.n, 2).value(origin) == doctest::Approx(2.0));
    CHECK(toda.hamiltonian.value(origin) == doctest::Approx(1.0));
    CHECK(hamiltonian(toda.pn.n, 0).value(origin) == doctest::Approx(0.0).epsilon(1e-14));
    for (const Point& p : sample_points(toda.pn.algebroid()->domain(), 10)) {
        CHECK(hamiltonian(toda.pn.n, 2).value(p) == doctest::Approx(2.0 * toda.hamiltonian.value(p)));
        CHECK(hamiltonian(toda.pn.n, 1).value(p) == doctest::Approx(2.0 * toda.momentum.value(p)));
    }
}

TEST_CASE("h0 and negative powers need a nondegenerate N")
{
    const AlgebroidPtr t = LieAlgebroid::tangent({"q1", "q2"}, box(2));
    const ScalarField z = ScalarField::constant(0.0, 2);
    const EndomorphismField d = EndomorphismField::from_fields(
        t, {{ScalarField::coordinate(0, 2, "q1"), z}, {z, ScalarField::constant(1.0, 2)}});
    CHECK_THROWS_AS(hamiltonian(d, 0).value(Point{-0.5, 0.0}), SingularPointError);
    CHECK_THROWS_AS(hamiltonian(d, -1).value(Point{0.0, 0.0}), SingularPointError);
    CHECK(hamiltonian(d, -1).value(Point{0.5, 0.0}) == doctest::Approx(-3.0));
}

TEST_CASE("hierarchy splits")
{
    const TodaPhysical toda = toda_physical(3);
    const std::vector<Point> pts = sample_points(toda_physical_det_domain(3), 30);
    const Report r = hierarchy_check(toda.pn, 2, IndexRange{0, 2}, pts);
    INFO(r.to_text());
    CHECK(r.checks().size() == 3);
    CHECK(r.pass());
    CHECK(r.max_residual() < 1e-8);

    // Direct comparison of two splits.
    const Multivector a = hierarchy_term(toda.pn, 0, 2);
    const Multivector b = hierarchy_term(toda.pn, 2, 0);
    for (const Point& p : pts) {
        CHECK(difference(a, b, p) < 1e-8);
    }

    const TodaPhysical t2 = toda_physical(2);
    const std::vector<Point> p2 = sample_points(toda_physical_det_domain(2), 20);
    for (int m = -1; m <= 4; ++m) {
        CHECK(hierarchy_check(t2.pn, m, IndexRange{-2, 4}, p2).pass());
    }
}

TEST_CASE("hierarchy step and modular scaling")
{
    const TodaPhysical toda = toda_physical(2);
    const std::vector<Point> pts = sample_points(toda.pn.algebroid()->domain(), 20);
    for (int m = 1; m <= 4; ++m) {
        CHECK(hierarchy_step_check(toda.pn, m, pts).pass);
    }
    CHECK(modular_scaling_check(toda.pn, 2, 0, pts).pass);
    CHECK(modular_scaling_check(toda.pn, 3, 1, pts).pass);

    const TodaAlgebroid alg = toda_algebroid(2);
    CHECK(modular_scaling_check(alg.pn, 2, 0, sample_points(alg.pn.algebroid()->domain(), 20)).pass);
}

TEST_CASE("pairwise compatibility of the hierarchy bivectors")
{
    const TodaPhysical toda = toda_physical(2);
    const std::vector<Point> pts = sample_points(toda.pn.algebroid()->domain(), 20);
    const Report r = pairwise_compatibility(toda.pn, 2, pts);
    CHECK(r.pass());
    CHECK(r.max_residual() < 1e-8);

    // Perturbing N by q1 in one corner breaks it.
    const AlgebroidPtr& a = toda.pn.algebroid();
    const EndomorphismField bump = EndomorphismField::from_fields(a, [&] {
        std::vector<std::vector<ScalarField>> rows(4, std::vector<ScalarField>(4, ScalarField::constant(0.0, 4)));
        rows[0][1] = ScalarField::coordinate(0, 4, "q1");
        return rows;
    }());
    const PNStructure broken("broken", toda.pn.pi, toda.pn.n + bump);
    const Report b = pairwise_compatibility(broken, 2, pts);
    CHECK_FALSE(b.pass());
    CHECK(b.max_residual() > 1e-3);
}

TEST_CASE("covered hierarchy on the Toda algebroid")
{
    const TodaAlgebroid alg = toda_algebroid(3);
    const AlgebroidPtr& a = alg.pn.algebroid();
    // rho(X^(2)) = -rho pi^sharp d h_2: twice the Toda flow with time reversed.
    const Multivector v = covered_hierarchy(alg.pn, 2);
    for (const Point& p : sample_points(a->domain(), 10)) {
        const std::vector<double> got = values_of(v.eval(p, 0));
        const double a1 = p[0], a2 = p[1], b1 = p[2], b2 = p[3], b3 = p[4];
        const std::vector<double> want{2 * a1 * (b1 - b2), 2 * a2 * (b2 - b3), -2 * a1, 2 * (a1 - a2), 2 * a2};
        for (std::size_t u = 0; u < 5; ++u) {
            CHECK(got[u] == doctest::Approx(want[u]).epsilon(1e-10));
        }
    }
    const PNStructure id("id", alg.pn.pi, EndomorphismField::identity(a));
    CHECK(magnitude(covered_hierarchy(id, 2), Point{0.5, 0.5, 0.1, 0.2, 0.3}) == 0.0);

    const TodaAlgebroid a2 = toda_algebroid(2);
    const Report r = covered_hierarchy_check(a2.pn, 2, IndexRange{0, 2}, IndexRange{0, 2}, 2,
                                             sample_points(toda_algebroid_det_domain(2), 20));
    INFO(r.to_text());
    CHECK(r.pass());
}

TEST_CASE("Hamiltonians are in involution")
{
    const TodaAlgebroid alg = toda_algebroid(3);
    const Report r = involution_check(alg.pn, 3, 2, sample_points(alg.pn.algebroid()->domain(), 20));
    INFO(r.to_text());
    CHECK(r.pass());

    const AlgebroidPtr t = LieAlgebroid::tangent({"q", "p"}, box(2));
    const Multivector pi = Multivector::frame(t, {0, 1});
    const CheckResult c = involution_residual(pi, ScalarField::coordinate(0, 2, "q"), ScalarField::coordinate(1, 2, "p"),
                                              sample_points(t->domain(), 3));
    CHECK_FALSE(c.pass);
    CHECK(c.max_residual == 1.0);
}

TEST_CASE("numeric rank")
{
    JetMatrix m(3, 3, Jet::constant(0.0, 0, 0));
    CHECK(numeric_rank(m) == 0);
    m(0, 1) = Jet::constant(1.0, 0, 0);
    m(1, 0) = Jet::constant(-1.0, 0, 0);
    CHECK(numeric_rank(m) == 2);
    for (int n : {2, 3, 4}) {
        const TodaFlaschka red = toda_flaschka_reduced(n);
        const Point x = sample_points(red.pi0.algebroid()->domain(), 1)[0];
        CHECK(bivector_rank(red.pi0, x) == 2 * n - 2);
    }
}
