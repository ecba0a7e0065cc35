#pragma once

// Cartan calculus of a Lie algebroid: the bracket of sections, the
// differential d_A, Lie derivatives, the Schouten bracket, and a validator
// for the algebroid axioms.
//
// Sign conventions used everywhere:
//   [e_I, g] = (-1)^(p-1) i_{d_A g} e_I        (so [X, g] = rho(X) g)
//   [e_I, e_J] = sum_{a,b} (-1)^(a+b) [e_ia, e_jb] ^ e_{I\a} ^ e_{J\b}

#include <cstdint>
#include <span>
#include <vector>

#include "pncalc/algebroid.hpp"
#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

/// Table-level kernels at one point. Inputs that get differentiated must
/// carry one order more than the requested result; results have the lowest
/// order the inputs support.
namespace cartan {

/// rho(e_i) f = sum_u rho_i^u df/dx^u.
Jet anchor_action(const StructureJets& s, int i, const Jet& f);

/// [X, Y] of two sections given by component tables.
std::vector<Jet> bracket(const StructureJets& s, std::span<const Jet> x, std::span<const Jet> y);

/// d_A of a degree-k form table.
std::vector<Jet> differential(const StructureJets& s, int k, std::span<const Jet> w);

/// Schouten bracket of a degree-p and a degree-q multivector table.
std::vector<Jet> schouten(const StructureJets& s, int p, std::span<const Jet> lhs, int q, std::span<const Jet> rhs);

} // namespace cartan

Multivector section_bracket(const Multivector& x, const Multivector& y);

/// rho(X) f for a section X.
ScalarField anchor_action(const Multivector& x, const ScalarField& f);

AForm differential(const AForm& w);

/// d_A f.
AForm differential(const AlgebroidPtr& algebroid, const ScalarField& f);

/// L_X w = d_A i_X w + i_X d_A w.
AForm lie_derivative(const Multivector& x, const AForm& w);

Multivector schouten(const Multivector& lhs, const Multivector& rhs);

/// Jacobi identity on frame triples, anchor homomorphism on coordinate
/// functions and the Leibniz rule, at seeded points of the sample domain.
Report validate_axioms(const AlgebroidPtr& algebroid, int points = 50, std::uint64_t seed = kDefaultSeed,
                       double tolerance = 1e-9);

} // namespace pncalc
