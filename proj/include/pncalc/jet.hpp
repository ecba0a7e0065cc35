#pragma once

// Truncated multivariate Taylor expansions ("jets") used as the number type
// for every pointwise evaluation in the library.
//
// A jet of order K in n variables stores the partial derivatives
// f^{(alpha)}(x0) for all multi-indices |alpha| <= K (derivative convention,
// not monomial coefficients). Multi-indices are laid out by total degree, so
// the order-k prefix of an order-K table is itself a valid order-k table.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pncalc/errors.hpp"

namespace pncalc {

class JetShape {
public:
    struct ProductTerm {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
        double weight; // gamma! / (alpha! beta!)
    };

    /// Interned shape for (vars, order). References stay valid for the
    /// lifetime of the program.
    static const JetShape& get(int vars, int order);

    int vars() const noexcept { return vars_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return degree_.size(); }

    /// Number of table entries with total degree <= k.
    std::size_t size_upto(int k) const;

    int degree(std::size_t idx) const { return degree_[idx]; }
    std::span<const int> exponent(std::size_t idx) const;

    /// Index of a multi-index, or npos if its degree exceeds the order.
    std::size_t index_of(std::span<const int> alpha) const;

    /// Index of alpha + e_u for entry idx (requires degree(idx) < order).
    std::size_t shifted(std::size_t idx, int u) const
    {
        return shift_[idx * static_cast<std::size_t>(vars_) + static_cast<std::size_t>(u)];
    }

    std::span<const ProductTerm> products() const noexcept { return products_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    JetShape(int vars, int order);

    int vars_;
    int order_;
    std::vector<int> exponents_; // size() * vars_
    std::vector<int> degree_;
    std::vector<std::size_t> shift_;
    std::vector<ProductTerm> products_;
};

class Jet {
public:
    /// The zero jet with no variables and order 0.
    Jet();

    static Jet zero(int vars, int order);
    static Jet constant(double value, int vars, int order);

    /// Jet of the coordinate function x_index at a point whose index-th
    /// coordinate equals value.
    static Jet variable(int index, double value, int vars, int order);

    int vars() const noexcept { return shape_->vars(); }
    int order() const noexcept { return shape_->order(); }
    const JetShape& shape() const noexcept { return *shape_; }

    double value() const noexcept { return c_[0]; }

    /// First partial derivative d/dx_u at the base point (0 if order < 1).
    double gradient(int u) const;

    /// Derivative-convention coefficient for a multi-index.
    double coeff(std::span<const int> alpha) const;
    double operator[](std::size_t idx) const { return c_[idx]; }
    std::span<const double> coefficients() const noexcept { return c_; }
    std::span<double> coefficients() noexcept { return c_; }

    Jet truncated(int order) const;

    /// d/dx_u as an exact jet of order K-1. Order-0 input is an error.
    Jet partial(int u) const;

    /// Maximum absolute coefficient.
    double max_abs() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(double rhs);
    Jet& operator-=(double rhs);
    Jet& operator*=(double rhs);
    Jet& operator/=(double rhs);

    friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
    friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
    friend Jet operator*(const Jet& lhs, const Jet& rhs);
    friend Jet operator/(const Jet& lhs, const Jet& rhs);
    friend Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
    friend Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
    friend Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
    friend Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
    friend Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
    friend Jet operator-(double lhs, const Jet& rhs) { return -rhs + lhs; }
    friend Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
    friend Jet operator/(double lhs, const Jet& rhs);

    std::string to_string() const;

private:
    Jet(const JetShape* shape, std::vector<double> c);

    // Shapes of binary operands are reconciled by truncating to the lower
    // order; the variable counts must agree.
    static const JetShape& common(const Jet& a, const Jet& b);

    const JetShape* shape_;
    std::vector<double> c_;

    friend Jet compose(const Jet& f, std::span<const double> derivatives);
};

/// g(f) given g^{(k)}(f(x0)) for k = 0..order.
Jet compose(const Jet& f, std::span<const double> derivatives);

Jet reciprocal(const Jet& f);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet pow(const Jet& f, int exponent);

/// Dense row-major matrix of jets sharing one shape.
class JetMatrix {
public:
    JetMatrix() = default;
    JetMatrix(std::size_t rows, std::size_t cols, const Jet& fill);

    static JetMatrix identity(std::size_t size, int vars, int order);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Jet& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Jet& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    JetMatrix transposed() const;
    JetMatrix truncated(int order) const;

    friend JetMatrix operator*(const JetMatrix& lhs, const JetMatrix& rhs);
    friend JetMatrix operator+(const JetMatrix& lhs, const JetMatrix& rhs);
    friend JetMatrix operator-(const JetMatrix& lhs, const JetMatrix& rhs);

    /// Order-0 values as a plain row-major array.
    std::vector<double> values() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Jet> data_;
};

struct JetSolution {
    JetMatrix x;
    Jet det;
};

/// Solves M X = B over the truncated jet ring by Gaussian elimination with
/// partial pivoting on order-0 magnitudes. A pivot is accepted when
/// |pivot| > 1e-12 * (largest order-0 magnitude in its row); otherwise the
/// matrix is reported degenerate with a SingularPointError.
JetSolution jet_linear_solve(const JetMatrix& m, const JetMatrix& b);
std::vector<Jet> jet_linear_solve(const JetMatrix& m, std::span<const Jet> b);

/// Determinant. Uses elimination when the order-0 matrix is regular and
/// falls back to cofactor expansion over column subsets otherwise, so it is
/// exact (including derivatives) at degenerate points too.
Jet jet_det(const JetMatrix& m);

/// Inverse via jet_linear_solve.
JetMatrix jet_inverse(const JetMatrix& m);

inline constexpr double kPivotTolerance = 1e-12;

} // namespace pncalc
