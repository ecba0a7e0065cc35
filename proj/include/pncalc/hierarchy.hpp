#pragma once

// The bi-Hamiltonian hierarchy of a Poisson-Nijenhuis pair:
//   h_0 = ln det N,  h_k = (1/k) Tr N^k,
//   X^(m) = N^(m-1) X_(N,pi) = d_{N^i pi} h_j   (i + j = m),
// and its image on the base through the anchor.

#include <cstdint>
#include <map>
#include <span>

#include "pncalc/poisson.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

struct IndexRange {
    int lo = -2;
    int hi = 5;

    bool contains(int k) const noexcept { return lo <= k && k <= hi; }
};

/// h_k for every k in the range. h_0 raises SingularPointError where
/// det N <= 0; negative k where N degenerates.
std::map<int, ScalarField> hamiltonians(const EndomorphismField& n, IndexRange range);
ScalarField hamiltonian(const EndomorphismField& n, int k);

/// X^(m) = N^(m-1) X_(N,pi).
Multivector hierarchy_field(const PNStructure& pn, int m);

/// d_{N^i pi} h_j.
Multivector hierarchy_term(const PNStructure& pn, int i, int j);

/// d_{N^i pi} h_j = X^(m) for every split m = i + j with i, j in the range.
Report hierarchy_check(const PNStructure& pn, int m, IndexRange range, std::span<const Point> points,
                       double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// Same, with separate ranges for i and j.
Report hierarchy_check(const PNStructure& pn, int m, IndexRange i_range, IndexRange j_range,
                       std::span<const Point> points, double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// X^(m+1) = N X^(m).
CheckResult hierarchy_step_check(const PNStructure& pn, int m, std::span<const Point> points,
                                 double tolerance = 1e-12, std::uint64_t seed = kDefaultSeed);

/// N^k X_(N,pi) = 1/(k-i+1) X_(N^(k-i+1), N^i pi).
CheckResult modular_scaling_check(const PNStructure& pn, int k, int i, std::span<const Point> points,
                                  double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// [N^i pi, N^j pi]_A for 0 <= i <= j <= kmax, plus skewness of N^k pi.
Report pairwise_compatibility(const PNStructure& pn, int kmax, std::span<const Point> points,
                              double tolerance = 1e-8, std::uint64_t seed = kDefaultSeed);

/// rho(X^(m)) on the base.
Multivector covered_hierarchy(const PNStructure& pn, int m);

/// rho(X^(m)) = -pi_{i,M}^sharp d h_j for each split, and pairwise
/// compatibility of the covered tensors pi_{k,M}, 0 <= k <= kmax.
Report covered_hierarchy_check(const PNStructure& pn, int m, IndexRange i_range, IndexRange j_range, int kmax,
                               std::span<const Point> points, double tolerance = 1e-8,
                               std::uint64_t seed = kDefaultSeed);

/// max |{f, g}_P| over the points for a base bivector P.
CheckResult involution_residual(const Multivector& p, const ScalarField& f, const ScalarField& g,
                                std::span<const Point> points, double tolerance = 1e-9,
                                std::uint64_t seed = kDefaultSeed);

/// {h_i, h_j} under every covered pi_{k,M}, 0 <= k <= kmax, 1 <= i < j <= hmax.
Report involution_check(const PNStructure& pn, int hmax, int kmax, std::span<const Point> points,
                        double tolerance = 1e-9, std::uint64_t seed = kDefaultSeed);

/// Largest rank of a skew matrix of values (Gaussian elimination).
int numeric_rank(const JetMatrix& m, double tolerance = 1e-9);

} // namespace pncalc
