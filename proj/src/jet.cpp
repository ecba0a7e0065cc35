#include "pncalc/jet.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace pncalc {

namespace {

void enumerate_degree(int vars, int degree, std::vector<int>& current, int slot, std::vector<int>& out)
{
    if (slot == vars - 1) {
        current[slot] = degree;
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int k = degree; k >= 0; --k) {
        current[slot] = k;
        enumerate_degree(vars, degree - k, current, slot + 1, out);
    }
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

constexpr int kFastVars = 16;
constexpr int kFastOrder = 8;

} // namespace

JetShape::JetShape(int vars, int order) : vars_(vars), order_(order)
{
    if (vars < 0 || order < 0) {
        throw DimensionError("jet shape requires vars >= 0 and order >= 0");
    }
    if (vars == 0) {
        degree_.push_back(0);
    } else {
        std::vector<int> current(static_cast<std::size_t>(vars), 0);
        for (int d = 0; d <= order; ++d) {
            std::vector<int> block;
            enumerate_degree(vars, d, current, 0, block);
            exponents_.insert(exponents_.end(), block.begin(), block.end());
            degree_.insert(degree_.end(), block.size() / static_cast<std::size_t>(vars), d);
        }
    }

    const std::size_t n = size();
    std::map<std::vector<int>, std::size_t> lookup;
    for (std::size_t i = 0; i < n; ++i) {
        auto e = exponent(i);
        lookup.emplace(std::vector<int>(e.begin(), e.end()), i);
    }

    shift_.assign(n * static_cast<std::size_t>(vars), npos);
    for (std::size_t i = 0; i < n; ++i) {
        if (degree_[i] >= order) {
            continue;
        }
        auto e = exponent(i);
        std::vector<int> alpha(e.begin(), e.end());
        for (int u = 0; u < vars; ++u) {
            ++alpha[static_cast<std::size_t>(u)];
            shift_[i * static_cast<std::size_t>(vars) + static_cast<std::size_t>(u)] = lookup.at(alpha);
            --alpha[static_cast<std::size_t>(u)];
        }
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (degree_[a] + degree_[b] > order) {
                continue;
            }
            std::vector<int> gamma(static_cast<std::size_t>(vars));
            double weight = 1.0;
            auto ea = exponent(a);
            auto eb = exponent(b);
            for (int u = 0; u < vars; ++u) {
                const auto s = static_cast<std::size_t>(u);
                gamma[s] = ea[s] + eb[s];
                weight *= factorial(gamma[s]) / (factorial(ea[s]) * factorial(eb[s]));
            }
            const std::size_t out = vars == 0 ? 0 : lookup.at(gamma);
            products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                 static_cast<std::uint32_t>(out), weight});
        }
    }
}

const JetShape& JetShape::get(int vars, int order)
{
    static std::array<std::atomic<const JetShape*>, (kFastVars + 1) * (kFastOrder + 1)> fast{};
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<JetShape>> registry;

    const bool small = vars >= 0 && vars <= kFastVars && order >= 0 && order <= kFastOrder;
    const std::size_t slot = small ? static_cast<std::size_t>(vars * (kFastOrder + 1) + order) : 0;
    if (small) {
        if (const JetShape* s = fast[slot].load(std::memory_order_acquire)) {
            return *s;
        }
    }
    std::lock_guard lock(mutex);
    auto& entry = registry[{vars, order}];
    if (!entry) {
        entry.reset(new JetShape(vars, order));
    }
    if (small) {
        fast[slot].store(entry.get(), std::memory_order_release);
    }
    return *entry;
}

std::size_t JetShape::size_upto(int k) const
{
    if (k >= order_) {
        return size();
    }
    return static_cast<std::size_t>(std::upper_bound(degree_.begin(), degree_.end(), k) - degree_.begin());
}

std::span<const int> JetShape::exponent(std::size_t idx) const
{
    if (vars_ == 0) {
        return {};
    }
    return std::span<const int>(exponents_).subspan(idx * static_cast<std::size_t>(vars_),
                                                    static_cast<std::size_t>(vars_));
}

std::size_t JetShape::index_of(std::span<const int> alpha) const
{
    if (alpha.size() != static_cast<std::size_t>(vars_)) {
        throw DimensionError("multi-index length does not match jet variable count");
    }
    int d = 0;
    for (int a : alpha) {
        if (a < 0) {
            throw DimensionError("negative multi-index entry");
        }
        d += a;
    }
    if (d > order_) {
        return npos;
    }
    for (std::size_t i = size_upto(d - 1 < 0 ? -1 : d - 1); i < size(); ++i) {
        if (degree_[i] != d) {
            break;
        }
        auto e = exponent(i);
        if (std::equal(e.begin(), e.end(), alpha.begin())) {
            return i;
        }
    }
    return npos;
}

// ----------------------------------------------------------------------------
// Jet
// ----------------------------------------------------------------------------

Jet::Jet() : shape_(&JetShape::get(0, 0)), c_(1, 0.0) {}

Jet::Jet(const JetShape* shape, std::vector<double> c) : shape_(shape), c_(std::move(c)) {}

Jet Jet::zero(int vars, int order)
{
    const JetShape& s = JetShape::get(vars, order);
    return Jet(&s, std::vector<double>(s.size(), 0.0));
}

Jet Jet::constant(double value, int vars, int order)
{
    Jet j = zero(vars, order);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(int index, double value, int vars, int order)
{
    if (index < 0 || index >= vars) {
        throw DimensionError("variable index " + std::to_string(index) + " out of range for " +
                             std::to_string(vars) + " variables");
    }
    Jet j = constant(value, vars, order);
    if (order >= 1) {
        j.c_[1 + static_cast<std::size_t>(index)] = 1.0;
    }
    return j;
}

double Jet::gradient(int u) const
{
    if (u < 0 || u >= vars()) {
        throw DimensionError("gradient index out of range");
    }
    return order() >= 1 ? c_[1 + static_cast<std::size_t>(u)] : 0.0;
}

double Jet::coeff(std::span<const int> alpha) const
{
    const std::size_t idx = shape_->index_of(alpha);
    return idx == JetShape::npos ? 0.0 : c_[idx];
}

Jet Jet::truncated(int order) const
{
    if (order >= this->order()) {
        return *this;
    }
    if (order < 0) {
        throw DimensionError("negative truncation order");
    }
    const JetShape& s = JetShape::get(vars(), order);
    return Jet(&s, std::vector<double>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(s.size())));
}

Jet Jet::partial(int u) const
{
    if (u < 0 || u >= vars()) {
        throw DimensionError("partial derivative index out of range");
    }
    if (order() == 0) {
        throw DimensionError("cannot differentiate an order-0 jet");
    }
    const JetShape& s = JetShape::get(vars(), order() - 1);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = c_[shape_->shifted(i, u)];
    }
    return Jet(&s, std::move(out));
}

double Jet::max_abs() const
{
    double m = 0.0;
    for (double v : c_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

const JetShape& Jet::common(const Jet& a, const Jet& b)
{
    if (a.vars() != b.vars()) {
        throw DimensionError("jets over different variable counts (" + std::to_string(a.vars()) + " vs " +
                             std::to_string(b.vars()) + ")");
    }
    return a.order() <= b.order() ? *a.shape_ : *b.shape_;
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (double& v : r.c_) {
        v = -v;
    }
    return r;
}

Jet& Jet::operator+=(const Jet& rhs)
{
    const JetShape& s = common(*this, rhs);
    if (&s != shape_) {
        *this = truncated(s.order());
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] += rhs.c_[i];
    }
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs)
{
    const JetShape& s = common(*this, rhs);
    if (&s != shape_) {
        *this = truncated(s.order());
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] -= rhs.c_[i];
    }
    return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs)
{
    const JetShape& s = Jet::common(lhs, rhs);
    std::vector<double> out(s.size(), 0.0);
    for (const auto& t : s.products()) {
        out[t.out] += t.weight * lhs.c_[t.lhs] * rhs.c_[t.rhs];
    }
    return Jet(&s, std::move(out));
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet operator/(double lhs, const Jet& rhs) { return reciprocal(rhs) * lhs; }

Jet& Jet::operator+=(double rhs)
{
    c_[0] += rhs;
    return *this;
}

Jet& Jet::operator-=(double rhs)
{
    c_[0] -= rhs;
    return *this;
}

Jet& Jet::operator*=(double rhs)
{
    for (double& v : c_) {
        v *= rhs;
    }
    return *this;
}

Jet& Jet::operator/=(double rhs)
{
    if (rhs == 0.0) {
        throw SingularPointError("division of a jet by zero");
    }
    for (double& v : c_) {
        v /= rhs;
    }
    return *this;
}

std::string Jet::to_string() const
{
    std::ostringstream os;
    os << "Jet(n=" << vars() << ", K=" << order() << ") [";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        os << (i ? ", " : "") << c_[i];
    }
    os << "]";
    return os.str();
}

Jet compose(const Jet& f, std::span<const double> derivatives)
{
    const int order = f.order();
    if (derivatives.size() < static_cast<std::size_t>(order) + 1) {
        throw DimensionError("compose needs derivatives up to the jet order");
    }
    Jet result = Jet::constant(derivatives[0], f.vars(), order);
    if (order == 0) {
        return result;
    }
    Jet delta = f;
    delta.c_[0] = 0.0;
    Jet power = delta;
    double fact = 1.0;
    for (int k = 1; k <= order; ++k) {
        fact *= k;
        const double w = derivatives[static_cast<std::size_t>(k)] / fact;
        for (std::size_t i = 0; i < result.c_.size(); ++i) {
            result.c_[i] += w * power.c_[i];
        }
        if (k < order) {
            power = power * delta;
        }
    }
    return result;
}

Jet reciprocal(const Jet& f)
{
    const double x = f.value();
    if (x == 0.0) {
        throw SingularPointError("division by a jet with zero constant term");
    }
    std::vector<double> d(static_cast<std::size_t>(f.order()) + 1);
    double fact = 1.0;
    double inv = 1.0 / x;
    double p = inv;
    for (int k = 0; k <= f.order(); ++k) {
        if (k > 0) {
            fact *= k;
            p *= inv;
        }
        d[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * fact * p;
    }
    return compose(f, d);
}

Jet exp(const Jet& f)
{
    std::vector<double> d(static_cast<std::size_t>(f.order()) + 1, std::exp(f.value()));
    return compose(f, d);
}

Jet log(const Jet& f)
{
    const double x = f.value();
    if (!(x > 0.0)) {
        throw SingularPointError("log of non-positive value " + std::to_string(x));
    }
    std::vector<double> d(static_cast<std::size_t>(f.order()) + 1);
    d[0] = std::log(x);
    double fact = 1.0; // (k-1)!
    double p = 1.0;
    for (int k = 1; k <= f.order(); ++k) {
        if (k > 1) {
            fact *= (k - 1);
        }
        p /= x;
        d[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) * fact * p;
    }
    return compose(f, d);
}

Jet sin(const Jet& f)
{
    const double s = std::sin(f.value());
    const double c = std::cos(f.value());
    const std::array<double, 4> cycle{s, c, -s, -c};
    std::vector<double> d(static_cast<std::size_t>(f.order()) + 1);
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = cycle[k % 4];
    }
    return compose(f, d);
}

Jet cos(const Jet& f)
{
    const double s = std::sin(f.value());
    const double c = std::cos(f.value());
    const std::array<double, 4> cycle{c, -s, -c, s};
    std::vector<double> d(static_cast<std::size_t>(f.order()) + 1);
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = cycle[k % 4];
    }
    return compose(f, d);
}

Jet pow(const Jet& f, int exponent)
{
    if (exponent < 0) {
        return pow(reciprocal(f), -exponent);
    }
    Jet result = Jet::constant(1.0, f.vars(), f.order());
    Jet base = f;
    unsigned e = static_cast<unsigned>(exponent);
    while (e) {
        if (e & 1U) {
            result = result * base;
        }
        e >>= 1U;
        if (e) {
            base = base * base;
        }
    }
    return result;
}

// ----------------------------------------------------------------------------
// JetMatrix
// ----------------------------------------------------------------------------

JetMatrix::JetMatrix(std::size_t rows, std::size_t cols, const Jet& fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{}

JetMatrix JetMatrix::identity(std::size_t size, int vars, int order)
{
    JetMatrix m(size, size, Jet::zero(vars, order));
    for (std::size_t i = 0; i < size; ++i) {
        m(i, i) = Jet::constant(1.0, vars, order);
    }
    return m;
}

JetMatrix JetMatrix::transposed() const
{
    JetMatrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.resize(data_.size());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t.data_[j * rows_ + i] = data_[i * cols_ + j];
        }
    }
    return t;
}

JetMatrix JetMatrix::truncated(int order) const
{
    JetMatrix t = *this;
    for (auto& j : t.data_) {
        j = j.truncated(order);
    }
    return t;
}

JetMatrix operator*(const JetMatrix& lhs, const JetMatrix& rhs)
{
    if (lhs.cols_ != rhs.rows_) {
        throw DimensionError("jet matrix product shape mismatch");
    }
    if (lhs.data_.empty() || rhs.data_.empty()) {
        return JetMatrix(lhs.rows_, rhs.cols_, Jet());
    }
    const Jet& a0 = lhs.data_.front();
    const Jet& b0 = rhs.data_.front();
    const int order = std::min(a0.order(), b0.order());
    JetMatrix out(lhs.rows_, rhs.cols_, Jet::zero(a0.vars(), order));
    for (std::size_t i = 0; i < lhs.rows_; ++i) {
        for (std::size_t k = 0; k < lhs.cols_; ++k) {
            const Jet& a = lhs(i, k);
            if (a.max_abs() == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

JetMatrix operator+(const JetMatrix& lhs, const JetMatrix& rhs)
{
    if (lhs.rows_ != rhs.rows_ || lhs.cols_ != rhs.cols_) {
        throw DimensionError("jet matrix sum shape mismatch");
    }
    JetMatrix out = lhs;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] += rhs.data_[i];
    }
    return out;
}

JetMatrix operator-(const JetMatrix& lhs, const JetMatrix& rhs)
{
    if (lhs.rows_ != rhs.rows_ || lhs.cols_ != rhs.cols_) {
        throw DimensionError("jet matrix difference shape mismatch");
    }
    JetMatrix out = lhs;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] -= rhs.data_[i];
    }
    return out;
}

std::vector<double> JetMatrix::values() const
{
    std::vector<double> v(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        v[i] = data_[i].value();
    }
    return v;
}

// ----------------------------------------------------------------------------
// Linear algebra over jets
// ----------------------------------------------------------------------------

namespace {

struct Elimination {
    JetMatrix a;
    JetMatrix b;
    Jet det;
};

// Forward elimination in place; throws SingularPointError on a rejected pivot.
Elimination eliminate(JetMatrix a, JetMatrix b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw DimensionError("linear solve requires a square matrix");
    }
    if (b.rows() != n) {
        throw DimensionError("right-hand side row count does not match matrix");
    }
    const Jet& proto = n ? a(0, 0) : Jet();
    Jet det = Jet::constant(1.0, proto.vars(), proto.order());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = -1.0;
        for (std::size_t r = col; r < n; ++r) {
            const double v = std::abs(a(r, col).value());
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        double row_max = 0.0;
        for (std::size_t j = col; j < n; ++j) {
            row_max = std::max(row_max, std::abs(a(pivot, j).value()));
        }
        if (row_max == 0.0 || best <= kPivotTolerance * row_max) {
            throw SingularPointError("degenerate endomorphism at point");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                std::swap(b(pivot, j), b(col, j));
            }
            det = -det;
        }
        det = det * a(col, col);
        const Jet inv = reciprocal(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col).max_abs() == 0.0) {
                continue;
            }
            const Jet factor = a(r, col) * inv;
            for (std::size_t j = col; j < n; ++j) {
                a(r, j) -= factor * a(col, j);
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                b(r, j) -= factor * b(col, j);
            }
        }
    }
    return {std::move(a), std::move(b), std::move(det)};
}

Jet cofactor_det(const JetMatrix& m)
{
    const std::size_t n = m.rows();
    if (n == 0) {
        return Jet::constant(1.0, 0, 0);
    }
    if (n > 20) {
        throw DimensionError("cofactor determinant limited to 20x20");
    }
    const Jet& proto = m(0, 0);
    std::vector<Jet> value(std::size_t{1} << n, Jet::zero(proto.vars(), proto.order()));
    std::vector<bool> live(value.size(), false);
    value[0] = Jet::constant(1.0, proto.vars(), proto.order());
    live[0] = true;
    for (std::uint32_t set = 0; set < value.size(); ++set) {
        if (!live[set]) {
            continue;
        }
        const auto row = static_cast<std::size_t>(std::popcount(set));
        if (row == n) {
            continue;
        }
        for (std::size_t c = 0; c < n; ++c) {
            const std::uint32_t bit = 1U << c;
            if (set & bit) {
                continue;
            }
            if (m(row, c).max_abs() == 0.0) {
                continue;
            }
            const std::uint32_t greater = set & ~((bit << 1U) - 1U);
            Jet term = value[set] * m(row, c);
            if (std::popcount(greater) % 2) {
                term = -term;
            }
            value[set | bit] += term;
            live[set | bit] = true;
        }
    }
    return value.back();
}

} // namespace

JetSolution jet_linear_solve(const JetMatrix& m, const JetMatrix& b)
{
    Elimination e = eliminate(m, b);
    const std::size_t n = m.rows();
    JetMatrix x = e.b;
    for (std::size_t ii = n; ii-- > 0;) {
        const Jet inv = reciprocal(e.a(ii, ii));
        for (std::size_t j = 0; j < x.cols(); ++j) {
            Jet acc = e.b(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) {
                acc -= e.a(ii, k) * x(k, j);
            }
            x(ii, j) = acc * inv;
        }
    }
    return {std::move(x), std::move(e.det)};
}

std::vector<Jet> jet_linear_solve(const JetMatrix& m, std::span<const Jet> b)
{
    JetMatrix rhs(b.size(), 1, Jet());
    for (std::size_t i = 0; i < b.size(); ++i) {
        rhs(i, 0) = b[i];
    }
    JetSolution s = jet_linear_solve(m, rhs);
    std::vector<Jet> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i] = s.x(i, 0);
    }
    return out;
}

Jet jet_det(const JetMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw DimensionError("determinant requires a square matrix");
    }
    try {
        return eliminate(m, JetMatrix(m.rows(), 0, Jet())).det;
    } catch (const SingularPointError&) {
        return cofactor_det(m);
    }
}

JetMatrix jet_inverse(const JetMatrix& m)
{
    const Jet& proto = m.rows() ? m(0, 0) : Jet();
    return jet_linear_solve(m, JetMatrix::identity(m.rows(), proto.vars(), proto.order())).x;
}

} // namespace pncalc
