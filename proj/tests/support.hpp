#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "pncalc/algebroid.hpp"
#include "pncalc/cartan.hpp"
#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace testing {

using namespace pncalc;

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// c0 + c.x + c2 x_a x_b + c3 sin(d.x + e) + c4 exp(0.3 x_a)
inline ScalarField random_field(std::mt19937_64& rng, int n)
{
    const double c0 = uniform(rng);
    if (n == 0) {
        return ScalarField::constant(c0, 0);
    }
    std::vector<double> c(static_cast<std::size_t>(n));
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        c[static_cast<std::size_t>(u)] = uniform(rng);
        d[static_cast<std::size_t>(u)] = uniform(rng);
    }
    const double c2 = uniform(rng);
    const double c3 = uniform(rng);
    const double c4 = uniform(rng);
    const double e = uniform(rng);
    const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int b = static_cast<int>(rng() % static_cast<unsigned>(n));
    return ScalarField(
        n,
        [=](std::span<const double> x, int order) {
            std::vector<Jet> v;
            for (int u = 0; u < n; ++u) {
                v.push_back(Jet::variable(u, x[static_cast<std::size_t>(u)], n, order));
            }
            Jet lin = Jet::constant(c0, n, order);
            Jet arg = Jet::constant(e, n, order);
            for (int u = 0; u < n; ++u) {
                lin += c[static_cast<std::size_t>(u)] * v[static_cast<std::size_t>(u)];
                arg += d[static_cast<std::size_t>(u)] * v[static_cast<std::size_t>(u)];
            }
            const Jet& xa = v[static_cast<std::size_t>(a)];
            const Jet& xb = v[static_cast<std::size_t>(b)];
            return lin + c2 * xa * xb + c3 * sin(arg) + c4 * exp(0.3 * xa);
        },
        "random");
}

template <class Tag>
SkewField<Tag> random_skew(std::mt19937_64& rng, const AlgebroidPtr& a, int degree)
{
    std::vector<ScalarField> table;
    const std::size_t size = SubsetIndex::get(a->rank()).count(degree);
    for (std::size_t i = 0; i < size; ++i) {
        table.push_back(random_field(rng, a->dim()));
    }
    return SkewField<Tag>::from_table(a, degree, table);
}

inline Multivector random_multivector(std::mt19937_64& rng, const AlgebroidPtr& a, int degree)
{
    return random_skew<MultivectorTag>(rng, a, degree);
}

inline AForm random_form(std::mt19937_64& rng, const AlgebroidPtr& a, int degree)
{
    return random_skew<FormTag>(rng, a, degree);
}

inline double max_abs_values(const std::vector<Jet>& t)
{
    return skew::max_value(t);
}

template <class Tag>
double difference(const SkewField<Tag>& a, const SkewField<Tag>& b, std::span<const double> x, int order = 0)
{
    REQUIRE(a.degree() == b.degree());
    const std::vector<Jet> ta = a.eval(x, order);
    const std::vector<Jet> tb = b.eval(x, order);
    REQUIRE(ta.size() == tb.size());
    double m = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        m = std::max(m, std::abs(ta[i].value() - tb[i].value()));
    }
    return m;
}

template <class Tag>
double magnitude(const SkewField<Tag>& a, std::span<const double> x, int order = 0)
{
    return skew::max_value(a.eval(x, order));
}

inline Domain box(int n, double lo = -1.0, double hi = 1.0)
{
    return Domain(static_cast<std::size_t>(n), Interval{lo, hi});
}

// TR^3 with the non-holonomic frame e_i = sum_u F_i^u d/dx^u: non-constant
// structure functions and anchor.
inline AlgebroidPtr frame_algebroid()
{
    auto frame_matrix = [](std::span<const double> x, int order) {
        const int n = 3;
        const Jet x1 = Jet::variable(0, x[0], n, order);
        const Jet x2 = Jet::variable(1, x[1], n, order);
        const Jet x3 = Jet::variable(2, x[2], n, order);
        const Jet one = Jet::constant(1.0, n, order);
        JetMatrix f(3, 3, one);
        f(0, 1) = 0.3 * x3;
        f(0, 2) = 0.2 * sin(x2);
        f(1, 0) = 0.25 * x1 * x1;
        f(1, 2) = 0.3 * x1;
        f(2, 0) = 0.2 * cos(x2 + x3);
        f(2, 1) = 0.1 * x2;
        return f;
    };
    auto evaluator = [frame_matrix](std::span<const double> x, int order) {
        const JetMatrix f1 = frame_matrix(x, order + 1);
        const JetMatrix f = f1.truncated(order);
        const JetMatrix finv = jet_inverse(f);
        StructureJets s = StructureJets::zero(3, 3, order);
        for (int i = 0; i < 3; ++i) {
            for (int u = 0; u < 3; ++u) {
                s.anchor(i, u) = f(static_cast<std::size_t>(i), static_cast<std::size_t>(u));
            }
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                std::vector<Jet> v(3, Jet::zero(3, order));
                for (int u = 0; u < 3; ++u) {
                    for (int w = 0; w < 3; ++w) {
                        v[static_cast<std::size_t>(u)] +=
                            f(static_cast<std::size_t>(i), static_cast<std::size_t>(w)) *
                                f1(static_cast<std::size_t>(j), static_cast<std::size_t>(u)).partial(w) -
                            f(static_cast<std::size_t>(j), static_cast<std::size_t>(w)) *
                                f1(static_cast<std::size_t>(i), static_cast<std::size_t>(u)).partial(w);
                    }
                }
                for (int k = 0; k < 3; ++k) {
                    Jet c = Jet::zero(3, order);
                    for (int u = 0; u < 3; ++u) {
                        c += v[static_cast<std::size_t>(u)] * finv(static_cast<std::size_t>(u), static_cast<std::size_t>(k));
                    }
                    s.C(i, j, k) = c;
                }
            }
        }
        return s;
    };
    return LieAlgebroid::create("frame-R3", {"x1", "x2", "x3"}, {"e1", "e2", "e3"}, evaluator, box(3));
}

// so(3) acting on R^3 by rotations.
inline AlgebroidPtr so3_action()
{
    const std::vector<std::string> coords{"x1", "x2", "x3"};
    LieAlgebroid::StructureMap c;
    auto k = [](double v) { return ScalarField::constant(v, 3); };
    auto z = k(0.0);
    c[{0, 1}] = {z, z, k(-1.0)};
    c[{1, 2}] = {k(-1.0), z, z};
    c[{0, 2}] = {z, k(1.0), z};
    auto x = [&](int u) { return ScalarField::coordinate(u, 3, coords[static_cast<std::size_t>(u)]); };
    // L_i = sum_{j,k} eps_ijk x_j d_k
    std::vector<std::vector<ScalarField>> rho{{z, -x(2), x(1)}, {x(2), z, -x(0)}, {-x(1), x(0), z}};
    return LieAlgebroid::from_fields("so3-action", coords, {"L1", "L2", "L3"}, c, rho, box(3));
}

// aff(1) acting on the line: rank 2 over a 1-dimensional base.
inline AlgebroidPtr aff1_action()
{
    LieAlgebroid::StructureMap c;
    c[{0, 1}] = {ScalarField::constant(0.0, 1), ScalarField::constant(1.0, 1)};
    const ScalarField x = ScalarField::coordinate(0, 1, "x");
    std::vector<std::vector<ScalarField>> rho{{-x}, {ScalarField::constant(1.0, 1)}};
    return LieAlgebroid::from_fields("aff1-action", {"x"}, {"e1", "e2"}, c, rho, box(1));
}

inline AlgebroidPtr two_dim_lie_algebra()
{
    return LieAlgebroid::lie_algebra({"e1", "e2"}, {{{0, 1}, {0.0, 1.0}}}, "aff1");
}

} // namespace testing

namespace testing {

// Central-difference gradient of a scalar field.
inline std::vector<double> fd_gradient(const ScalarField& f, std::vector<double> x, double h = 1e-6)
{
    std::vector<double> g(x.size());
    for (std::size_t u = 0; u < x.size(); ++u) {
        const double x0 = x[u];
        x[u] = x0 + h;
        const double fp = f.value(x);
        x[u] = x0 - h;
        const double fm = f.value(x);
        x[u] = x0;
        g[u] = (fp - fm) / (2.0 * h);
    }
    return g;
}

inline double max_gap(const std::vector<Jet>& a, const std::vector<Jet>& b)
{
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].value() - b[i].value()));
    }
    return m;
}

inline double structure_gap(const StructureJets& a, const StructureJets& b)
{
    return std::max(max_gap(a.c, b.c), max_gap(a.rho, b.rho));
}

// Endomorphism with random smooth entries (not Nijenhuis in general).
inline EndomorphismField random_endomorphism(std::mt19937_64& rng, const AlgebroidPtr& a)
{
    std::vector<std::vector<ScalarField>> rows;
    for (int i = 0; i < a->rank(); ++i) {
        std::vector<ScalarField> row;
        for (int j = 0; j < a->rank(); ++j) {
            row.push_back(random_field(rng, a->dim()));
        }
        rows.push_back(row);
    }
    return EndomorphismField::from_fields(a, rows);
}

inline std::vector<double> values_of(const std::vector<Jet>& t)
{
    std::vector<double> v;
    for (const Jet& j : t) {
        v.push_back(j.value());
    }
    return v;
}

} // namespace testing
