#pragma once

// The non-periodic A_n Toda lattice in physical, Flaschka, extended
// Flaschka and algebroid form.

#include <cstdint>
#include <span>

#include "pncalc/poisson.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

/// Tangent algebroid of R^2n, coordinates q_1..q_n, p_1..p_n.
struct TodaPhysical {
    int n = 0;
    PNStructure pn;        // canonical pi_0 and N = pi_1^sharp o (pi_0^sharp)^-1
    Multivector pi1;
    ScalarField hamiltonian; // sum p^2/2 + sum exp(q_i - q_{i+1})
    ScalarField momentum;    // sum p
};

TodaPhysical toda_physical(int n);

/// Box with det N > 0 for the h_0-dependent checks: q in [-0.1, 0.1], p in [2, 2.5].
Domain toda_physical_det_domain(int n);

/// pi_j^sharp d h_2 - pi_{j+2}^sharp d h_0 with h_2 the Toda Hamiltonian and
/// h_0 = c log det N (c = 1/2 in the proposition).
CheckResult toda_multi_check(const TodaPhysical& toda, int j, std::span<const Point> points, double log_factor = 0.5,
                             double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// Two Poisson tensors on coordinates a_1..a_n, b_1..b_n.
struct TodaFlaschka {
    int n = 0;
    Multivector pi0;
    Multivector pi1;
};

/// Extended Flaschka chart a_i = exp(q_i - q_{i+1}) (i < n), a_n = exp(q_n), b = p.
TodaFlaschka toda_extended_flaschka(int n);

/// The bracket lists with {a_n, b_n}_0 = 1 and {a_n, b_n}_1 = b_n, kept for comparison.
TodaFlaschka toda_extended_flaschka_literal(int n);

/// phi: a_n -> -a_n pushes each tensor to itself.
Report involution_check(const TodaFlaschka& ext, std::span<const Point> points, double tolerance = 1e-12,
                        std::uint64_t seed = kDefaultSeed);

/// N-image of the vector d/da_1 + .. + d/db_n minus its d/da_n part: its a_n
/// component, which is nonzero off a_n = 0.
double extended_invariance_defect(const TodaFlaschka& ext, std::span<const double> point);

/// Reduced Flaschka tensors on a_1..a_{n-1}, b_1..b_n (restrict to a_n = 0,
/// delete the a_n row and column).
TodaFlaschka toda_flaschka_reduced(int n);

/// Rank of the skew matrix of a base bivector at a point.
int bivector_rank(const Multivector& pi, std::span<const double> point);

struct TodaAlgebroid {
    int n = 0;
    PNStructure pn; // pi_0 and N solving Pi_0 M = Pi_1
    Multivector pi1;
};

/// Base (a_1..a_{n-1}, b_1..b_n), frame e_1..e_n, f_1..f_n, zero brackets.
TodaAlgebroid toda_algebroid(int n);

/// a in [0.2, 1], b in [2, 2.5]: det N > 0 for n = 2, 3.
Domain toda_algebroid_det_domain(int n);

/// (q, p) -> (a_1..a_{n-1}, b_1..b_n).
Point flaschka_point(std::span<const double> qp);

} // namespace pncalc
