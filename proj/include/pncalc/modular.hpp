#pragma once

// Modular forms with respect to the canonical frame volume e_1 ^ .. ^ e_r and
// the coordinate volume dx_1 ^ .. ^ dx_n, and the modular vector field of a
// Poisson-Nijenhuis pair.

#include <cstdint>
#include <span>

#include "pncalc/algebroid.hpp"
#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

enum class ModularMethod { Local, Definition };

/// xi_A(e_j) = sum_k C_jk^k + div rho(e_j) (local), or read off from
/// [e_j, eta] and the divergence of rho(e_j) (definition).
AForm modular_form(const AlgebroidPtr& algebroid, ModularMethod method = ModularMethod::Local);

/// Largest difference between the two methods.
CheckResult modular_methods_agree(const AlgebroidPtr& algebroid, std::span<const Point> points,
                                  double tolerance = 1e-10, std::uint64_t seed = kDefaultSeed);

/// Modular form for the volume f eta, evaluated from the definition.
AForm rescaled_modular_form(const AlgebroidPtr& algebroid, const ScalarField& f);

/// xi' = xi + d_A log f for eta' = f eta (f > 0).
CheckResult rescale_check(const AlgebroidPtr& algebroid, const ScalarField& f, std::span<const Point> points,
                          double tolerance = 1e-10, std::uint64_t seed = kDefaultSeed);

/// d_A Tr N, the canonical representative of the relative modular class.
AForm relative_modular_rep(const EndomorphismField& n);

/// xi_{A_N} - N* xi_A - d_A Tr N.
CheckResult modular_deformation_check(const EndomorphismField& n, std::span<const Point> points,
                                      double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// X_(N,pi) = d_pi Tr N.
Multivector pn_modular_vector_field(const Multivector& pi, const EndomorphismField& n);

/// xi_{A*_{N*}} - N xi_{A*} against d_pi Tr N.
CheckResult pn_modular_dual_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                  double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// d_{N pi} X_(N,pi) = 0.
CheckResult pn_modular_cocycle_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                     double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// X_(N,pi) = d_{N pi} ln det N (det N > 0 at the points).
CheckResult pn_modular_coboundary_check(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                                        double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

} // namespace pncalc
