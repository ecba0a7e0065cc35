#pragma once

// Poisson bivectors on a Lie algebroid and Poisson-Nijenhuis pairs.
//
// Conventions: pi^sharp(a) = i_a pi, so (pi^sharp a)^j = sum_i pi^{ij} a_i;
// {f, g} = pi(d_A f, d_A g); d_pi f = [pi, f] = -pi^sharp d_A f. The
// hierarchy bivector N^k pi is the one with (N^k pi)^sharp = N^k o pi^sharp,
// i.e. coefficient matrix Pi M^k.

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "pncalc/algebroid.hpp"
#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

/// Dense skew matrix Pi[i][j] = pi^{ij} of a bivector table.
JetMatrix bivector_matrix(int rank, std::span<const Jet> table);

/// Bivector table from the strict upper triangle of a matrix.
std::vector<Jet> bivector_table(const JetMatrix& m);

Multivector sharp(const Multivector& pi, const AForm& alpha);

ScalarField poisson_bracket(const Multivector& pi, const ScalarField& f, const ScalarField& g);

/// [pi, pi]_A, and the Jacobiator of the covered bracket on coordinate triples.
Report is_poisson(const Multivector& pi, std::span<const Point> points, double tolerance = 1e-9,
                  std::uint64_t seed = kDefaultSeed);

/// A* with [a, b]_pi and anchor rho o pi^sharp, over the dual frame.
AlgebroidPtr dual_algebroid(const Multivector& pi, std::string name = {});

/// d_pi P = [pi, P]_A.
Multivector d_pi(const Multivector& pi, const Multivector& p);

/// N^k pi (k may be negative when N is invertible).
Multivector hierarchy_bivector(const Multivector& pi, const EndomorphismField& n, int k);

/// max |(Pi M^k)_ij + (Pi M^k)_ji|.
CheckResult skewness_residual(const Multivector& pi, const EndomorphismField& n, int k, std::span<const Point> points,
                              double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// (a) N o pi^sharp = pi^sharp o N*; (b) [,]_{N pi} = [,]_{N*} on the dual frame.
Report compatibility(const Multivector& pi, const EndomorphismField& n, std::span<const Point> points,
                     double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// pi_M = rho pi rho*, as a bivector on the base tangent algebroid.
Multivector covered_poisson(const Multivector& pi);

/// rho(X) as a vector field on the base tangent algebroid.
Multivector anchor_image(const Multivector& x);

/// X_f = pi^sharp d_A f.
Multivector hamiltonian_vf(const Multivector& pi, const ScalarField& f);

/// N with N o pi0^sharp = pi1^sharp, i.e. M solving Pi0 M = Pi1.
EndomorphismField recursion_operator(const Multivector& pi0, const Multivector& pi1);

/// Checks on the fiberwise-linear Poisson structure of A*: {f_X, f_Y} = f_[X,Y],
/// q_* X_{f_X} = rho(X), and that pullbacks of base coordinates commute.
Report fiber_linear_bracket_check(const Multivector& x, const Multivector& y, int points, std::uint64_t seed = kDefaultSeed,
                                  double tolerance = 1e-10);

struct PNStructure {
    PNStructure(std::string name_, Multivector pi_, EndomorphismField n_)
        : name(std::move(name_)), pi(std::move(pi_)), n(std::move(n_))
    {
        require_same(pi.algebroid(), n.algebroid(), "PNStructure");
    }

    std::string name;
    Multivector pi;
    EndomorphismField n;

    const AlgebroidPtr& algebroid() const { return pi.algebroid(); }

    /// Poisson condition, torsion and compatibility at the points.
    Report check(std::span<const Point> points, double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed) const;
    bool checked() const noexcept { return checked_.has_value(); }
    bool passed() const noexcept { return checked_.value_or(false); }

private:
    mutable std::optional<bool> checked_;
};

} // namespace pncalc
