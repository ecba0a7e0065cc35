#pragma once

// Nijenhuis operators: torsion, the deformed algebroid A_N and the trace
// identities of a Nijenhuis operator.

#include <cstdint>
#include <span>
#include <string>

#include "pncalc/algebroid.hpp"
#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

namespace cartan {

/// Structure functions and anchor of A_N at a point, from the structure of A
/// (order K) and the matrix of N (order K + 1).
StructureJets deformed_structure(const StructureJets& s, const JetMatrix& m);

/// T_N(e_i, e_j) for all frame pairs; entry (i * r + j) * r + k.
std::vector<Jet> torsion_table(const StructureJets& s, const JetMatrix& m);

} // namespace cartan

/// [X, Y]_N = [NX, Y] + [X, NY] - N[X, Y].
Multivector deformed_bracket(const EndomorphismField& n, const Multivector& x, const Multivector& y);

/// T_N(X, Y) = N[X, Y]_N - [NX, NY].
Multivector torsion(const EndomorphismField& n, const Multivector& x, const Multivector& y);

/// Largest |T_N(e_i, e_j)| over frame pairs and points.
CheckResult torsion_residual(const EndomorphismField& n, std::span<const Point> points, double tolerance = 1e-8,
                             std::uint64_t seed = kDefaultSeed);

/// A_N: bracket [,]_N and anchor rho o N.
AlgebroidPtr deform(const EndomorphismField& n, std::string name = {});

/// N + lambda I.
EndomorphismField shift(const EndomorphismField& n, double lambda);

/// m N*^(m-1) d_A Tr N = d_A Tr N^m.
CheckResult trace_identity(const EndomorphismField& n, int m, std::span<const Point> points,
                           double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// k N*^k d_A ln det N = d_A Tr N^k (needs det N > 0 at the points).
CheckResult nijdet_identity(const EndomorphismField& n, int k, std::span<const Point> points,
                            double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// Both identities for one exponent.
Report trace_identities(const EndomorphismField& n, int m, std::span<const Point> points, double tolerance = 1e-8,
                        std::uint64_t seed = kDefaultSeed);

} // namespace pncalc
