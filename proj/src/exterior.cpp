#include "pncalc/exterior.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>

#include "pncalc/algebroid.hpp"

namespace pncalc {

SubsetIndex::SubsetIndex(int rank) : rank_(rank), by_degree_(static_cast<std::size_t>(rank) + 1)
{
    const std::uint32_t total = 1u << rank;
    index_.assign(total, 0);
    // Lexicographic order of increasing tuples, degree by degree.
    for (int p = 0; p <= rank; ++p) {
        std::vector<int> tuple(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) {
            tuple[static_cast<std::size_t>(i)] = i;
        }
        auto& list = by_degree_[static_cast<std::size_t>(p)];
        for (;;) {
            list.push_back(mask_of(tuple));
            int pos = p - 1;
            while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == rank - p + pos) {
                --pos;
            }
            if (pos < 0) {
                break;
            }
            ++tuple[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < p; ++i) {
                tuple[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i - 1)] + 1;
            }
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            index_[list[i]] = static_cast<std::uint32_t>(i);
        }
    }
}

const SubsetIndex& SubsetIndex::get(int rank)
{
    if (rank < 0 || rank > kMaxRank) {
        throw DimensionError("frame rank " + std::to_string(rank) + " outside 0.." + std::to_string(kMaxRank));
    }
    static std::array<std::once_flag, kMaxRank + 1> once;
    static std::array<std::unique_ptr<SubsetIndex>, kMaxRank + 1> table;
    const auto r = static_cast<std::size_t>(rank);
    std::call_once(once[r], [&] { table[r].reset(new SubsetIndex(rank)); });
    return *table[r];
}

std::size_t SubsetIndex::count(int degree) const
{
    if (degree < 0 || degree > rank_) {
        return 0;
    }
    return by_degree_[static_cast<std::size_t>(degree)].size();
}

std::span<const std::uint32_t> SubsetIndex::masks(int degree) const
{
    if (degree < 0 || degree > rank_) {
        return {};
    }
    return by_degree_[static_cast<std::size_t>(degree)];
}

std::uint32_t SubsetIndex::mask_of(std::span<const int> indices)
{
    std::uint32_t m = 0;
    for (int i : indices) {
        m |= 1u << i;
    }
    return m;
}

std::vector<int> SubsetIndex::indices_of(std::uint32_t mask)
{
    std::vector<int> out;
    while (mask != 0) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

namespace skew {

int sign_before(std::uint32_t mask, int k)
{
    return (std::popcount(mask & ((1u << k) - 1u)) & 1) ? -1 : 1;
}

int wedge_sign(std::uint32_t a, std::uint32_t b)
{
    if ((a & b) != 0) {
        return 0;
    }
    int inversions = 0;
    for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(a >> (j + 1));
    }
    return (inversions & 1) ? -1 : 1;
}

std::vector<Jet> zeros(std::size_t size, int vars, int order)
{
    return std::vector<Jet>(size, Jet::zero(vars, order));
}

std::vector<Jet> wedge(int rank, int p, std::span<const Jet> lhs, int q, std::span<const Jet> rhs, int vars,
                       int order)
{
    const SubsetIndex& idx = SubsetIndex::get(rank);
    std::vector<Jet> out = zeros(idx.count(p + q), vars, order);
    if (out.empty()) {
        return out;
    }
    const auto lm = idx.masks(p);
    const auto rm = idx.masks(q);
    for (std::size_t a = 0; a < lm.size(); ++a) {
        if (lhs[a].max_abs() == 0.0) {
            continue;
        }
        for (std::size_t b = 0; b < rm.size(); ++b) {
            const int s = wedge_sign(lm[a], rm[b]);
            if (s == 0) {
                continue;
            }
            Jet term = lhs[a] * rhs[b];
            Jet& slot = out[idx.index(lm[a] | rm[b])];
            if (s > 0) {
                slot += term;
            } else {
                slot -= term;
            }
        }
    }
    return out;
}

std::vector<Jet> contract(int rank, int k, std::span<const Jet> a, int p, std::span<const Jet> table, int vars,
                          int order)
{
    const SubsetIndex& idx = SubsetIndex::get(rank);
    std::vector<Jet> out = zeros(idx.count(p - k), vars, order);
    if (out.empty() || k < 0) {
        return out;
    }
    const auto km = idx.masks(k);
    const auto jm = idx.masks(p - k);
    for (std::size_t i = 0; i < km.size(); ++i) {
        if (a[i].max_abs() == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < jm.size(); ++j) {
            const int s = wedge_sign(km[i], jm[j]);
            if (s == 0) {
                continue;
            }
            Jet term = a[i] * table[idx.index(km[i] | jm[j])];
            if (s > 0) {
                out[j] += term;
            } else {
                out[j] -= term;
            }
        }
    }
    return out;
}

namespace {

Jet minor(const JetMatrix& m, std::uint32_t rows, std::uint32_t cols)
{
    const std::vector<int> r = SubsetIndex::indices_of(rows);
    const std::vector<int> c = SubsetIndex::indices_of(cols);
    if (r.size() == 1) {
        return m(static_cast<std::size_t>(r[0]), static_cast<std::size_t>(c[0]));
    }
    JetMatrix sub(r.size(), c.size(), m(0, 0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            sub(i, j) = m(static_cast<std::size_t>(r[i]), static_cast<std::size_t>(c[j]));
        }
    }
    if (r.size() == 2) {
        return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
    }
    return jet_det(sub);
}

} // namespace

std::vector<Jet> exterior_power(const JetMatrix& m, int p, std::span<const Jet> table, bool forms)
{
    const int rank = static_cast<int>(m.rows());
    const SubsetIndex& idx = SubsetIndex::get(rank);
    const auto masks = idx.masks(p);
    const Jet& sample = m(0, 0);
    if (p == 0) {
        return std::vector<Jet>(table.begin(), table.end());
    }
    std::vector<Jet> out = zeros(masks.size(), sample.vars(), sample.order());
    for (std::size_t a = 0; a < masks.size(); ++a) {
        for (std::size_t b = 0; b < masks.size(); ++b) {
            const Jet d = minor(m, masks[a], masks[b]);
            if (forms) {
                out[a] += d * table[b];
            } else {
                out[b] += table[a] * d;
            }
        }
    }
    return out;
}

double max_value(std::span<const Jet> table)
{
    double m = 0.0;
    for (const Jet& j : table) {
        const double v = std::abs(j.value());
        if (std::isnan(v)) {
            return v;
        }
        m = std::max(m, v);
    }
    return m;
}

} // namespace skew

void require_same(const AlgebroidPtr& a, const AlgebroidPtr& b, const char* what)
{
    if (a.get() != b.get()) {
        throw DimensionError(std::string(what) + ": arguments live on different algebroids (\"" + a->name() +
                             "\" vs \"" + b->name() + "\")");
    }
}

template <class Tag>
SkewField<Tag>::SkewField(AlgebroidPtr algebroid, int degree, Evaluator evaluator, std::string label)
    : algebroid_(std::move(algebroid)), degree_(degree), rank_(algebroid_->rank()), vars_(algebroid_->dim()),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))), label_(std::move(label))
{
    if (degree < 0) {
        throw DimensionError("negative degree");
    }
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::zero(AlgebroidPtr algebroid, int degree)
{
    const int rank = algebroid->rank();
    const int vars = algebroid->dim();
    const std::size_t size = SubsetIndex::get(rank).count(degree);
    return SkewField(
        std::move(algebroid), degree,
        [size, vars](std::span<const double>, int order) { return skew::zeros(size, vars, order); }, "0");
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::scalar(AlgebroidPtr algebroid, ScalarField f)
{
    if (f.arity() != algebroid->dim()) {
        throw DimensionError("function arity does not match the base dimension");
    }
    std::string label = f.label();
    return SkewField(
        std::move(algebroid), 0,
        [f = std::move(f)](std::span<const double> x, int order) { return std::vector<Jet>{f.eval(x, order)}; },
        std::move(label));
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::frame(AlgebroidPtr algebroid, std::vector<int> indices)
{
    const ScalarField one = ScalarField::constant(1.0, algebroid->dim());
    std::map<std::vector<int>, ScalarField> c;
    c.emplace(std::move(indices), one);
    const int degree = static_cast<int>(c.begin()->first.size());
    return from_coefficients(std::move(algebroid), degree, c);
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::from_coefficients(AlgebroidPtr algebroid, int degree,
                                                 const std::map<std::vector<int>, ScalarField>& coefficients)
{
    const int rank = algebroid->rank();
    const SubsetIndex& idx = SubsetIndex::get(rank);
    std::vector<ScalarField> table(idx.count(degree), ScalarField::constant(0.0, algebroid->dim()));
    for (const auto& [tuple, f] : coefficients) {
        if (static_cast<int>(tuple.size()) != degree) {
            throw DimensionError("coefficient tuple of wrong length");
        }
        std::vector<int> sorted = tuple;
        int sign = 1;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] < 0 || sorted[i] >= rank) {
                throw DimensionError("frame index " + std::to_string(sorted[i]) + " out of range");
            }
            for (std::size_t j = i + 1; j < sorted.size(); ++j) {
                if (sorted[j] < sorted[i]) {
                    sign = -sign;
                }
            }
        }
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            continue;
        }
        const std::size_t pos = idx.index(SubsetIndex::mask_of(sorted));
        table[pos] = sign > 0 ? table[pos] + f : table[pos] - f;
    }
    return from_table(std::move(algebroid), degree, std::move(table));
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::from_table(AlgebroidPtr algebroid, int degree, std::vector<ScalarField> table)
{
    const int vars = algebroid->dim();
    if (table.size() != SubsetIndex::get(algebroid->rank()).count(degree)) {
        throw DimensionError("coefficient table has the wrong size");
    }
    for (const ScalarField& f : table) {
        if (f.arity() != vars) {
            throw DimensionError("coefficient arity does not match the base dimension");
        }
    }
    return SkewField(std::move(algebroid), degree, [table = std::move(table), vars](std::span<const double> x, int order) {
        std::vector<Jet> out;
        out.reserve(table.size());
        for (const ScalarField& f : table) {
            if (f.constant_value()) {
                out.push_back(Jet::constant(*f.constant_value(), vars, order));
            } else {
                out.push_back(f.eval(x, order));
            }
        }
        return out;
    });
}

template <class Tag>
std::vector<Jet> SkewField<Tag>::eval(std::span<const double> point, int order) const
{
    if (static_cast<int>(point.size()) != vars_) {
        throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, base has " +
                             std::to_string(vars_));
    }
    return (*evaluator_)(point, order);
}

template <class Tag>
ScalarField SkewField<Tag>::coefficient(std::vector<int> indices) const
{
    if (static_cast<int>(indices.size()) != degree_) {
        throw DimensionError("coefficient tuple of wrong length");
    }
    int sign = 1;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= rank_) {
            throw DimensionError("frame index out of range");
        }
        for (std::size_t j = i + 1; j < indices.size(); ++j) {
            if (indices[j] < indices[i]) {
                sign = -sign;
            }
        }
    }
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        return ScalarField::constant(0.0, vars_);
    }
    const std::size_t pos = SubsetIndex::get(rank_).index(SubsetIndex::mask_of(indices));
    auto ev = evaluator_;
    return ScalarField(
        vars_,
        [ev, pos, sign](std::span<const double> x, int order) {
            Jet j = (*ev)(x, order)[pos];
            return sign > 0 ? j : -j;
        },
        label_ + "[" + std::to_string(pos) + "]");
}

template <class Tag>
ScalarField SkewField<Tag>::as_scalar() const
{
    if (degree_ != 0) {
        throw DimensionError("as_scalar on degree " + std::to_string(degree_));
    }
    return coefficient({});
}

template <class Tag>
void SkewField<Tag>::check_rebind(const AlgebroidPtr& other) const
{
    if (other->rank() != rank_ || other->dim() != vars_) {
        throw DimensionError("rebind requires equal rank and base dimension");
    }
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::operator-() const
{
    auto ev = evaluator_;
    return SkewField(algebroid_, degree_, [ev](std::span<const double> x, int order) {
        std::vector<Jet> t = (*ev)(x, order);
        for (Jet& j : t) {
            j = -j;
        }
        return t;
    });
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::operator+(const SkewField& rhs) const
{
    require_same(algebroid_, rhs.algebroid_, "sum");
    if (degree_ != rhs.degree_) {
        throw DimensionError("sum of different degrees");
    }
    auto a = evaluator_;
    auto b = rhs.evaluator_;
    return SkewField(algebroid_, degree_, [a, b](std::span<const double> x, int order) {
        std::vector<Jet> t = (*a)(x, order);
        std::vector<Jet> u = (*b)(x, order);
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] += u[i];
        }
        return t;
    });
}

template <class Tag>
SkewField<Tag> SkewField<Tag>::operator-(const SkewField& rhs) const
{
    return *this + (-rhs);
}

template <class T>
SkewField<T> operator*(const ScalarField& f, const SkewField<T>& p)
{
    if (f.arity() != p.vars_) {
        throw DimensionError("function arity does not match the base dimension");
    }
    auto ev = p.evaluator_;
    return SkewField<T>(p.algebroid_, p.degree_, [f, ev](std::span<const double> x, int order) {
        std::vector<Jet> t = (*ev)(x, order);
        const Jet fj = f.eval(x, order);
        for (Jet& j : t) {
            j *= fj;
        }
        return t;
    });
}

template <class T>
SkewField<T> operator*(double c, const SkewField<T>& p)
{
    auto ev = p.evaluator_;
    return SkewField<T>(p.algebroid_, p.degree_, [c, ev](std::span<const double> x, int order) {
        std::vector<Jet> t = (*ev)(x, order);
        for (Jet& j : t) {
            j *= c;
        }
        return t;
    });
}

template class SkewField<MultivectorTag>;
template class SkewField<FormTag>;
template Multivector operator*(const ScalarField&, const Multivector&);
template AForm operator*(const ScalarField&, const AForm&);
template Multivector operator*(double, const Multivector&);
template AForm operator*(double, const AForm&);

template <class Tag>
SkewField<Tag> wedge(const SkewField<Tag>& lhs, const SkewField<Tag>& rhs)
{
    require_same(lhs.algebroid(), rhs.algebroid(), "wedge");
    const int rank = lhs.rank();
    const int vars = lhs.vars();
    const int p = lhs.degree();
    const int q = rhs.degree();
    if (p + q > rank) {
        return SkewField<Tag>::zero(lhs.algebroid(), p + q);
    }
    return SkewField<Tag>(lhs.algebroid(), p + q, [lhs, rhs, rank, vars, p, q](std::span<const double> x, int order) {
        const std::vector<Jet> a = lhs.eval(x, order);
        const std::vector<Jet> b = rhs.eval(x, order);
        return skew::wedge(rank, p, a, q, b, vars, order);
    });
}

template Multivector wedge(const Multivector&, const Multivector&);
template AForm wedge(const AForm&, const AForm&);

AForm interior(const Multivector& x, const AForm& w)
{
    require_same(x.algebroid(), w.algebroid(), "interior");
    const int rank = w.rank();
    const int vars = w.vars();
    const int k = x.degree();
    const int q = w.degree();
    if (k > q || q == 0) {
        return AForm::zero(w.algebroid(), std::max(q - k, 0));
    }
    return AForm(w.algebroid(), q - k, [x, w, rank, vars, k, q](std::span<const double> pt, int order) {
        const std::vector<Jet> a = x.eval(pt, order);
        const std::vector<Jet> t = w.eval(pt, order);
        return skew::contract(rank, k, a, q, t, vars, order);
    });
}

Multivector interior(const AForm& a, const Multivector& p)
{
    require_same(a.algebroid(), p.algebroid(), "interior");
    const int rank = p.rank();
    const int vars = p.vars();
    const int k = a.degree();
    const int q = p.degree();
    if (k > q || q == 0) {
        return Multivector::zero(p.algebroid(), std::max(q - k, 0));
    }
    return Multivector(p.algebroid(), q - k, [a, p, rank, vars, k, q](std::span<const double> pt, int order) {
        const std::vector<Jet> av = a.eval(pt, order);
        const std::vector<Jet> t = p.eval(pt, order);
        return skew::contract(rank, k, av, q, t, vars, order);
    });
}

JetMatrix matrix_power(const JetMatrix& m, int k)
{
    const Jet& s = m(0, 0);
    if (k == 0) {
        return JetMatrix::identity(m.rows(), s.vars(), s.order());
    }
    JetMatrix base = k > 0 ? m : jet_inverse(m);
    unsigned e = static_cast<unsigned>(k > 0 ? k : -k);
    JetMatrix result = JetMatrix::identity(m.rows(), s.vars(), s.order());
    bool first = true;
    while (e != 0) {
        if (e & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1;
        if (e != 0) {
            base = base * base;
        }
    }
    return result;
}

EndomorphismField::EndomorphismField(AlgebroidPtr algebroid, Evaluator evaluator, std::string label)
    : algebroid_(std::move(algebroid)), rank_(algebroid_->rank()), vars_(algebroid_->dim()),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))), label_(std::move(label))
{
    if (rank_ == 0) {
        throw DimensionError("endomorphism of a rank-0 bundle");
    }
}

EndomorphismField EndomorphismField::from_fields(AlgebroidPtr algebroid, const std::vector<std::vector<ScalarField>>& rows)
{
    const auto r = static_cast<std::size_t>(algebroid->rank());
    const int vars = algebroid->dim();
    if (rows.size() != r) {
        throw DimensionError("endomorphism needs " + std::to_string(r) + " rows");
    }
    for (const auto& row : rows) {
        if (row.size() != r) {
            throw DimensionError("endomorphism rows must have " + std::to_string(r) + " entries");
        }
        for (const ScalarField& f : row) {
            if (f.arity() != vars) {
                throw DimensionError("endomorphism entry arity does not match the base dimension");
            }
        }
    }
    return EndomorphismField(std::move(algebroid), [rows, r, vars](std::span<const double> x, int order) {
        JetMatrix m(r, r, Jet::zero(vars, order));
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) {
                const ScalarField& f = rows[i][j];
                if (f.constant_value()) {
                    m(i, j) = Jet::constant(*f.constant_value(), vars, order);
                } else {
                    m(i, j) = f.eval(x, order);
                }
            }
        }
        return m;
    });
}

EndomorphismField EndomorphismField::identity(AlgebroidPtr algebroid)
{
    return scaled_identity(std::move(algebroid), 1.0);
}

EndomorphismField EndomorphismField::scaled_identity(AlgebroidPtr algebroid, double c)
{
    const auto r = static_cast<std::size_t>(algebroid->rank());
    const int vars = algebroid->dim();
    return EndomorphismField(
        std::move(algebroid),
        [r, vars, c](std::span<const double>, int order) {
            JetMatrix m(r, r, Jet::zero(vars, order));
            for (std::size_t i = 0; i < r; ++i) {
                m(i, i) = Jet::constant(c, vars, order);
            }
            return m;
        },
        c == 1.0 ? "I" : "cI");
}

JetMatrix EndomorphismField::eval(std::span<const double> point, int order) const
{
    if (static_cast<int>(point.size()) != vars_) {
        throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, base has " +
                             std::to_string(vars_));
    }
    return (*evaluator_)(point, order);
}

ScalarField EndomorphismField::entry(int i, int j) const
{
    if (i < 0 || j < 0 || i >= rank_ || j >= rank_) {
        throw DimensionError("endomorphism entry out of range");
    }
    auto ev = evaluator_;
    return ScalarField(
        vars_,
        [ev, i, j](std::span<const double> x, int order) {
            return (*ev)(x, order)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        },
        label_ + "(" + std::to_string(i) + "," + std::to_string(j) + ")");
}

Multivector EndomorphismField::apply(const Multivector& p) const
{
    require_same(algebroid_, p.algebroid(), "apply");
    auto ev = evaluator_;
    const int degree = p.degree();
    return Multivector(algebroid_, degree, [ev, p, degree](std::span<const double> x, int order) {
        const std::vector<Jet> t = p.eval(x, order);
        return skew::exterior_power((*ev)(x, order), degree, t, false);
    });
}

AForm EndomorphismField::dual_apply(const AForm& w) const
{
    require_same(algebroid_, w.algebroid(), "dual_apply");
    auto ev = evaluator_;
    const int degree = w.degree();
    return AForm(algebroid_, degree, [ev, w, degree](std::span<const double> x, int order) {
        const std::vector<Jet> t = w.eval(x, order);
        return skew::exterior_power((*ev)(x, order), degree, t, true);
    });
}

EndomorphismField EndomorphismField::power(int k) const
{
    auto ev = evaluator_;
    return EndomorphismField(
        algebroid_, [ev, k](std::span<const double> x, int order) { return matrix_power((*ev)(x, order), k); },
        label_ + "^" + std::to_string(k));
}

EndomorphismField EndomorphismField::shift(double lambda) const
{
    auto ev = evaluator_;
    return EndomorphismField(
        algebroid_,
        [ev, lambda](std::span<const double> x, int order) {
            JetMatrix m = (*ev)(x, order);
            for (std::size_t i = 0; i < m.rows(); ++i) {
                m(i, i) += lambda;
            }
            return m;
        },
        label_ + "+lambda I");
}

EndomorphismField EndomorphismField::transpose_on(AlgebroidPtr dual) const
{
    if (dual->rank() != rank_ || dual->dim() != vars_) {
        throw DimensionError("transpose_on requires equal rank and base dimension");
    }
    auto ev = evaluator_;
    return EndomorphismField(
        std::move(dual), [ev](std::span<const double> x, int order) { return (*ev)(x, order).transposed(); },
        label_ + "*");
}

EndomorphismField EndomorphismField::rebind(AlgebroidPtr other) const
{
    if (other->rank() != rank_ || other->dim() != vars_) {
        throw DimensionError("rebind requires equal rank and base dimension");
    }
    return EndomorphismField(std::move(other), *evaluator_, label_);
}

ScalarField EndomorphismField::trace() const
{
    auto ev = evaluator_;
    return ScalarField(
        vars_,
        [ev](std::span<const double> x, int order) {
            const JetMatrix m = (*ev)(x, order);
            Jet t = m(0, 0);
            for (std::size_t i = 1; i < m.rows(); ++i) {
                t += m(i, i);
            }
            return t;
        },
        "Tr " + label_);
}

ScalarField EndomorphismField::det() const
{
    auto ev = evaluator_;
    return ScalarField(
        vars_, [ev](std::span<const double> x, int order) { return jet_det((*ev)(x, order)); }, "det " + label_);
}

EndomorphismField operator*(const EndomorphismField& a, const EndomorphismField& b)
{
    require_same(a.algebroid_, b.algebroid_, "composition");
    auto ea = a.evaluator_;
    auto eb = b.evaluator_;
    // (A o B)(e_i) = A(sum_j B_ij e_j), so the matrix is M_B M_A.
    return EndomorphismField(
        a.algebroid_, [ea, eb](std::span<const double> x, int order) { return (*eb)(x, order) * (*ea)(x, order); },
        a.label_ + " o " + b.label_);
}

EndomorphismField operator+(const EndomorphismField& a, const EndomorphismField& b)
{
    require_same(a.algebroid_, b.algebroid_, "sum");
    auto ea = a.evaluator_;
    auto eb = b.evaluator_;
    return EndomorphismField(
        a.algebroid_, [ea, eb](std::span<const double> x, int order) { return (*ea)(x, order) + (*eb)(x, order); },
        a.label_ + " + " + b.label_);
}

} // namespace pncalc
