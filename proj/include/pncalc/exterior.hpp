#pragma once

// Frame-indexed exterior algebra over a Lie algebroid with a global frame
// e_1..e_r. A degree-p multivector (or form) is stored as the table of its
// coefficients on strictly increasing index tuples, ordered
// lexicographically; tuples are handled as bitmasks internally.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pncalc/field.hpp"
#include "pncalc/jet.hpp"

namespace pncalc {

class LieAlgebroid;
using AlgebroidPtr = std::shared_ptr<const LieAlgebroid>;

inline constexpr int kMaxRank = 16;

class SubsetIndex {
public:
    static const SubsetIndex& get(int rank);

    int rank() const noexcept { return rank_; }

    /// binomial(rank, degree); 0 outside 0..rank.
    std::size_t count(int degree) const;
    std::span<const std::uint32_t> masks(int degree) const;
    std::uint32_t mask(int degree, std::size_t idx) const { return by_degree_[static_cast<std::size_t>(degree)][idx]; }

    /// Position of a mask within the table of its own degree.
    std::size_t index(std::uint32_t mask) const { return index_[mask]; }

    static std::uint32_t mask_of(std::span<const int> indices);
    static std::vector<int> indices_of(std::uint32_t mask);

private:
    explicit SubsetIndex(int rank);

    int rank_;
    std::vector<std::vector<std::uint32_t>> by_degree_;
    std::vector<std::uint32_t> index_;
};

namespace skew {

/// (-1)^(number of elements of mask below k).
int sign_before(std::uint32_t mask, int k);

/// Sign of e_A ^ e_B relative to e_{A u B}; 0 when A and B intersect.
int wedge_sign(std::uint32_t a, std::uint32_t b);

std::vector<Jet> zeros(std::size_t size, int vars, int order);

std::vector<Jet> wedge(int rank, int p, std::span<const Jet> lhs, int q, std::span<const Jet> rhs, int vars,
                       int order);

/// Interior product of a degree-k table into a degree-p table of the dual
/// kind, contracting the leading slots: (i_A P)_J = sum_K sign(K,J) A_K P_{KuJ}.
std::vector<Jet> contract(int rank, int k, std::span<const Jet> a, int p, std::span<const Jet> table, int vars,
                          int order);

/// Action of the p-th exterior power of an endomorphism with matrix m
/// (row i = image of e_i). For multivectors (NP)_J = sum_I P_I det m[I,J];
/// for forms (N*w)_I = sum_J det m[I,J] w_J.
std::vector<Jet> exterior_power(const JetMatrix& m, int p, std::span<const Jet> table, bool forms);

/// Largest |order-0 value| in a table.
double max_value(std::span<const Jet> table);

} // namespace skew

struct MultivectorTag {};
struct FormTag {};

template <class Tag>
class SkewField {
public:
    using Evaluator = std::function<std::vector<Jet>(std::span<const double>, int)>;

    SkewField(AlgebroidPtr algebroid, int degree, Evaluator evaluator, std::string label = {});

    static SkewField zero(AlgebroidPtr algebroid, int degree);
    static SkewField scalar(AlgebroidPtr algebroid, ScalarField f);

    /// e_{i1} ^ ... ^ e_{ip} (0-based, any order; repeated indices give zero).
    static SkewField frame(AlgebroidPtr algebroid, std::vector<int> indices);

    /// Sum of f * e_I over the given tuples; unsorted tuples pick up the
    /// permutation sign.
    static SkewField from_coefficients(AlgebroidPtr algebroid, int degree,
                                       const std::map<std::vector<int>, ScalarField>& coefficients);

    /// Coefficients in table order (increasing tuples, lexicographic).
    static SkewField from_table(AlgebroidPtr algebroid, int degree, std::vector<ScalarField> table);

    const AlgebroidPtr& algebroid() const noexcept { return algebroid_; }
    int degree() const noexcept { return degree_; }
    int rank() const noexcept { return rank_; }
    int vars() const noexcept { return vars_; }
    std::size_t size() const { return SubsetIndex::get(rank_).count(degree_); }
    const std::string& label() const noexcept { return label_; }

    std::vector<Jet> eval(std::span<const double> point, int order) const;

    ScalarField coefficient(std::vector<int> indices) const;

    /// The degree-0 part as a function (degree must be 0).
    ScalarField as_scalar() const;

    /// Same coefficient tables read over another algebroid of equal rank and
    /// base, e.g. forms on A as multivectors on the dual algebroid.
    template <class Other>
    SkewField<Other> rebind(AlgebroidPtr other) const
    {
        check_rebind(other);
        return SkewField<Other>(std::move(other), degree_, *evaluator_, label_);
    }

    SkewField operator-() const;
    SkewField operator+(const SkewField& rhs) const;
    SkewField operator-(const SkewField& rhs) const;

    template <class T>
    friend SkewField<T> operator*(const ScalarField& f, const SkewField<T>& p);
    template <class T>
    friend SkewField<T> operator*(double c, const SkewField<T>& p);

private:
    void check_rebind(const AlgebroidPtr& other) const;

    AlgebroidPtr algebroid_;
    int degree_;
    int rank_;
    int vars_;
    std::shared_ptr<const Evaluator> evaluator_;
    std::string label_;
};

using Multivector = SkewField<MultivectorTag>;
using AForm = SkewField<FormTag>;

extern template class SkewField<MultivectorTag>;
extern template class SkewField<FormTag>;

template <class T>
SkewField<T> operator*(const ScalarField& f, const SkewField<T>& p);
template <class T>
SkewField<T> operator*(double c, const SkewField<T>& p);

/// Throws DimensionError unless both objects live on the same algebroid.
void require_same(const AlgebroidPtr& a, const AlgebroidPtr& b, const char* what);

template <class Tag>
SkewField<Tag> wedge(const SkewField<Tag>& lhs, const SkewField<Tag>& rhs);

/// i_X w with X of degree p and w of degree q: degree q - p. Contracting a
/// function (q = 0) gives zero.
AForm interior(const Multivector& x, const AForm& w);

/// i_a P, contracting the leading slots of P. i_{df} i_{dg} reversed order
/// gives the pairing: pi(a, b) = i_b i_a pi.
Multivector interior(const AForm& a, const Multivector& p);

/// Endomorphism N of A given by the matrix M[i][j] = N_i^j, N(e_i) = sum_j N_i^j e_j.
class EndomorphismField {
public:
    using Evaluator = std::function<JetMatrix(std::span<const double>, int)>;

    EndomorphismField(AlgebroidPtr algebroid, Evaluator evaluator, std::string label = {});

    static EndomorphismField from_fields(AlgebroidPtr algebroid, const std::vector<std::vector<ScalarField>>& rows);
    static EndomorphismField identity(AlgebroidPtr algebroid);
    static EndomorphismField scaled_identity(AlgebroidPtr algebroid, double c);

    const AlgebroidPtr& algebroid() const noexcept { return algebroid_; }
    int rank() const noexcept { return rank_; }
    int vars() const noexcept { return vars_; }
    const std::string& label() const noexcept { return label_; }

    JetMatrix eval(std::span<const double> point, int order) const;
    ScalarField entry(int i, int j) const;

    /// N acting on multivectors of any degree through its exterior powers.
    Multivector apply(const Multivector& p) const;

    /// N* on forms: (N*w)(X1..Xp) = w(NX1, .., NXp).
    AForm dual_apply(const AForm& w) const;

    /// N^k for any integer k; negative powers solve over the jet ring and
    /// raise SingularPointError where N degenerates.
    EndomorphismField power(int k) const;

    /// N + lambda I.
    EndomorphismField shift(double lambda) const;

    /// N*, as an endomorphism of another algebroid whose frame is the dual
    /// frame e^i (matrix transpose).
    EndomorphismField transpose_on(AlgebroidPtr dual) const;

    /// The same matrix field read as an endomorphism of another algebroid
    /// with equal rank and base (e.g. N on the deformed algebroid A_N).
    EndomorphismField rebind(AlgebroidPtr other) const;

    ScalarField trace() const;

    /// Determinant; exact at degenerate points as well.
    ScalarField det() const;

    /// Composition a o b (matrix M_b M_a).
    friend EndomorphismField operator*(const EndomorphismField& a, const EndomorphismField& b);
    friend EndomorphismField operator+(const EndomorphismField& a, const EndomorphismField& b);

private:
    AlgebroidPtr algebroid_;
    int rank_;
    int vars_;
    std::shared_ptr<const Evaluator> evaluator_;
    std::string label_;
};

/// Integer power of a jet matrix (negative powers invert).
JetMatrix matrix_power(const JetMatrix& m, int k);

} // namespace pncalc
