#include "doctest.h"

#include "support.hpp"

#include <numbers>
#include <sstream>

#include "pncalc/flows.hpp"
#include "pncalc/hierarchy.hpp"
#include "pncalc/toda.hpp"

using namespace pncalc;
using namespace testing;

namespace {

const VectorField oscillator = [](std::span<const double> x) { return Point{x[1], -x[0]}; };

double oscillator_error(double dt)
{
    const Trajectory tr = integrate(oscillator, {1.0, 0.0}, 1.0, dt);
    const Point& end = tr.states.back();
    return std::hypot(end[0] - std::cos(1.0), end[1] + std::sin(1.0));
}

} // namespace

TEST_CASE("zero field keeps the state")
{
    const Trajectory tr = integrate([](std::span<const double> x) { return Point(x.size(), 0.0); }, {0.3, -0.2}, 1.0, 0.1);
    CHECK(tr.times.size() == 11);
    CHECK(tr.times.back() == 1.0);
    for (const Point& s : tr.states) {
        CHECK(s == Point{0.3, -0.2});
    }
}

TEST_CASE("harmonic oscillator")
{
    const double period = 2.0 * std::numbers::pi;
    const Trajectory tr = integrate(oscillator, {1.0, 0.0}, period, 1e-3, {"q", "p"});
    CHECK(tr.times.back() == period);
    CHECK(std::abs(tr.states.back()[0] - 1.0) < 1e-8);
    CHECK(std::abs(tr.states.back()[1]) < 1e-8);

    const Trajectory longer = integrate(oscillator, {1.0, 0.0}, 10.0, 1e-3, {"q", "p"});
    const ScalarField energy = ScalarField::parse("(q^2 + p^2)/2", {"q", "p"});
    const std::vector<Drift> d = conservation_report(longer, {{"E", energy}});
    CHECK(d.size() == 1);
    CHECK(d[0].initial == doctest::Approx(0.5));
    CHECK(d[0].drift < 1e-9);

    // Fourth order: halving dt divides the error by about 16.
    const double ratio = oscillator_error(0.1) / oscillator_error(0.05);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("integrator errors")
{
    CHECK_THROWS_AS(integrate(oscillator, {1.0, 0.0}, 1.0, 0.0), DimensionError);
    CHECK_THROWS_AS(integrate(oscillator, {1.0, 0.0}, 1.0, -0.1), DimensionError);
    CHECK_THROWS_AS(integrate(oscillator, {1.0, 0.0}, -1.0, 0.1), DimensionError);

    const VectorField blowup = [](std::span<const double> x) { return Point{x[0] * x[0]}; };
    try {
        integrate(blowup, {1.0}, 2.0, 1e-2);
        FAIL("expected a singularity");
    } catch (const SingularPointError& e) {
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
}

TEST_CASE("Hamiltonian flow field on the plane")
{
    const AlgebroidPtr t = LieAlgebroid::tangent({"q", "p"}, box(2));
    const Multivector pi = Multivector::frame(t, {0, 1});
    const ScalarField h = ScalarField::parse("(q^2 + p^2)/2", {"q", "p"});
    const Multivector field = hamiltonian_flow_field(pi, h);
    const Point x{0.3, -0.7};
    CHECK(vector_field(field)(x) == Point{-0.7, -0.3});
    const Trajectory tr = integrate(field, {1.0, 0.0}, 1.0, 1e-3);
    CHECK(tr.coords == std::vector<std::string>{"q", "p"});
    CHECK(tr.states.back()[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-10));
    CHECK(tr.states.back()[1] == doctest::Approx(-std::sin(1.0)).epsilon(1e-10));
}

TEST_CASE("Toda flow in Flaschka coordinates")
{
    const TodaAlgebroid alg = toda_algebroid(3);
    const TodaFlaschka red = toda_flaschka_reduced(3);
    const std::map<int, ScalarField> h = hamiltonians(alg.pn.n, IndexRange{1, 3});
    const Point x0{1.0, 0.8, 0.3, -0.1, 0.2};

    const Trajectory a = integrate(hamiltonian_flow_field(red.pi0, h.at(2)), x0, 10.0, 1e-2);
    for (const Point& s : a.states) {
        CHECK(s[0] > 0.0);
        CHECK(s[1] > 0.0);
    }
    for (const Drift& d : conservation_report(a, {{"h1", h.at(1)}, {"h2", h.at(2)}, {"h3", h.at(3)}})) {
        INFO(d.name);
        CHECK(d.drift < 1e-6);
    }

    // Bi-Hamiltonian: the pi1 flow of h1 is the pi0 flow of h2.
    const Trajectory b = integrate(hamiltonian_flow_field(red.pi1, h.at(1)), x0, 10.0, 1e-2);
    CHECK(max_deviation(a, b) < 1e-9);

    // The Hamiltonians stay in involution along the trajectory.
    const Multivector p0 = red.pi0;
    for (std::size_t s = 0; s < a.states.size(); s += 100) {
        const std::vector<Point> here{a.states[s]};
        CHECK(involution_residual(p0, h.at(1), h.at(3), here).max_residual < 1e-9);
        CHECK(involution_residual(red.pi1, h.at(2), h.at(3), here).max_residual < 1e-9);
    }
}

TEST_CASE("CSV output")
{
    const Trajectory tr = integrate(oscillator, {1.0, 0.0}, 1.0, 0.1, {"q", "p"});
    std::ostringstream out;
    write_csv(tr, out, 3);
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    CHECK(lines.front() == "t,q,p");
    // Samples 0, 3, 6, 9 and the final sample 10.
    CHECK(lines.size() == 6);
    CHECK(lines.back().rfind("1,", 0) == 0);
}
