#include "pncalc/hierarchy.hpp"

#include <cmath>

#include "pncalc/cartan.hpp"
#include "pncalc/modular.hpp"

namespace pncalc {

ScalarField hamiltonian(const EndomorphismField& n, int k)
{
    if (k == 0) {
        return map_field(
            n.det(),
            [](const Jet& d) {
                if (!(d.value() > 0.0)) {
                    throw SingularPointError("h_0 = ln det N needs det N > 0, got " + std::to_string(d.value()));
                }
                return log(d);
            },
            "h_0");
    }
    const ScalarField t = n.power(k).trace();
    return map_field(t, [k](const Jet& j) { return j / static_cast<double>(k); }, "h_" + std::to_string(k));
}

std::map<int, ScalarField> hamiltonians(const EndomorphismField& n, IndexRange range)
{
    std::map<int, ScalarField> out;
    for (int k = range.lo; k <= range.hi; ++k) {
        out.emplace(k, hamiltonian(n, k));
    }
    return out;
}

Multivector hierarchy_field(const PNStructure& pn, int m)
{
    return pn.n.power(m - 1).apply(pn_modular_vector_field(pn.pi, pn.n));
}

Multivector hierarchy_term(const PNStructure& pn, int i, int j)
{
    return d_pi(hierarchy_bivector(pn.pi, pn.n, i), Multivector::scalar(pn.algebroid(), hamiltonian(pn.n, j)));
}

namespace {

double gap(const Multivector& a, const Multivector& b, const Point& x)
{
    const std::vector<Jet> ta = a.eval(x, 0);
    const std::vector<Jet> tb = b.eval(x, 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < ta.size(); ++k) {
        const double v = std::abs(ta[k].value() - tb[k].value());
        if (std::isnan(v)) {
            return v;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

std::string split_name(const char* what, int i, int j)
{
    return std::string(what) + " i=" + std::to_string(i) + " j=" + std::to_string(j);
}

} // namespace

Report hierarchy_check(const PNStructure& pn, int m, IndexRange range, std::span<const Point> points,
                       double tolerance, std::uint64_t seed)
{
    return hierarchy_check(pn, m, range, range, points, tolerance, seed);
}

Report hierarchy_check(const PNStructure& pn, int m, IndexRange i_range, IndexRange j_range,
                       std::span<const Point> points, double tolerance, std::uint64_t seed)
{
    Report report("hierarchy m=" + std::to_string(m));
    const Multivector xm = hierarchy_field(pn, m);
    for (int i = i_range.lo; i <= i_range.hi; ++i) {
        const int j = m - i;
        if (!j_range.contains(j)) {
            continue;
        }
        const Multivector term = hierarchy_term(pn, i, j);
        report.add(max_residual(split_name("hierarchy", i, j), points, tolerance, seed,
                                [&](const Point& x) { return gap(term, xm, x); }));
    }
    return report;
}

CheckResult hierarchy_step_check(const PNStructure& pn, int m, std::span<const Point> points, double tolerance,
                                 std::uint64_t seed)
{
    const Multivector next = hierarchy_field(pn, m + 1);
    const Multivector step = pn.n.apply(hierarchy_field(pn, m));
    return max_residual("hierarchy_step m=" + std::to_string(m), points, tolerance, seed,
                        [&](const Point& x) { return gap(next, step, x); });
}

CheckResult modular_scaling_check(const PNStructure& pn, int k, int i, std::span<const Point> points, double tolerance,
                                  std::uint64_t seed)
{
    const int e = k - i + 1;
    const Multivector lhs = pn.n.power(k).apply(pn_modular_vector_field(pn.pi, pn.n));
    const Multivector rhs =
        (1.0 / e) * pn_modular_vector_field(hierarchy_bivector(pn.pi, pn.n, i), pn.n.power(e));
    return max_residual("modular_scaling k=" + std::to_string(k) + " i=" + std::to_string(i), points, tolerance, seed,
                        [&](const Point& x) { return gap(lhs, rhs, x); });
}

Report pairwise_compatibility(const PNStructure& pn, int kmax, std::span<const Point> points, double tolerance,
                              std::uint64_t seed)
{
    Report report("pairwise compatibility");
    std::vector<Multivector> pis;
    for (int k = 0; k <= kmax; ++k) {
        pis.push_back(hierarchy_bivector(pn.pi, pn.n, k));
        if (k > 0) {
            report.add(skewness_residual(pn.pi, pn.n, k, points, tolerance, seed));
        }
    }
    for (int i = 0; i <= kmax; ++i) {
        for (int j = i; j <= kmax; ++j) {
            const Multivector s = schouten(pis[static_cast<std::size_t>(i)], pis[static_cast<std::size_t>(j)]);
            report.add(max_residual("schouten " + std::to_string(i) + "," + std::to_string(j), points, tolerance, seed,
                                    [&](const Point& x) { return skew::max_value(s.eval(x, 0)); }));
        }
    }
    return report;
}

Multivector covered_hierarchy(const PNStructure& pn, int m)
{
    return anchor_image(hierarchy_field(pn, m));
}

Report covered_hierarchy_check(const PNStructure& pn, int m, IndexRange i_range, IndexRange j_range, int kmax,
                               std::span<const Point> points, double tolerance, std::uint64_t seed)
{
    Report report("covered hierarchy m=" + std::to_string(m));
    const Multivector field = covered_hierarchy(pn, m);
    const AlgebroidPtr base = pn.algebroid()->base_tangent();
    for (int i = i_range.lo; i <= i_range.hi; ++i) {
        const int j = m - i;
        if (!j_range.contains(j)) {
            continue;
        }
        const Multivector pim = covered_poisson(hierarchy_bivector(pn.pi, pn.n, i));
        const Multivector rhs = -sharp(pim, differential(base, hamiltonian(pn.n, j)));
        report.add(max_residual(split_name("covered", i, j), points, tolerance, seed,
                                [&](const Point& x) { return gap(field, rhs, x); }));
    }
    std::vector<Multivector> covered;
    for (int k = 0; k <= kmax; ++k) {
        covered.push_back(covered_poisson(hierarchy_bivector(pn.pi, pn.n, k)));
    }
    for (int i = 0; i <= kmax; ++i) {
        for (int j = i; j <= kmax; ++j) {
            const Multivector s = schouten(covered[static_cast<std::size_t>(i)], covered[static_cast<std::size_t>(j)]);
            report.add(max_residual("covered schouten " + std::to_string(i) + "," + std::to_string(j), points, tolerance,
                                    seed, [&](const Point& x) { return skew::max_value(s.eval(x, 0)); }));
        }
    }
    return report;
}

CheckResult involution_residual(const Multivector& p, const ScalarField& f, const ScalarField& g,
                                std::span<const Point> points, double tolerance, std::uint64_t seed)
{
    const ScalarField b = poisson_bracket(p, f, g);
    return max_residual("involution {" + f.label() + "," + g.label() + "}", points, tolerance, seed,
                        [&](const Point& x) { return std::abs(b.value(x)); });
}

Report involution_check(const PNStructure& pn, int hmax, int kmax, std::span<const Point> points, double tolerance,
                        std::uint64_t seed)
{
    Report report("involution");
    const std::map<int, ScalarField> h = hamiltonians(pn.n, IndexRange{1, hmax});
    for (int k = 0; k <= kmax; ++k) {
        const Multivector pk = covered_poisson(hierarchy_bivector(pn.pi, pn.n, k));
        for (int i = 1; i <= hmax; ++i) {
            for (int j = i + 1; j <= hmax; ++j) {
                CheckResult c = involution_residual(pk, h.at(i), h.at(j), points, tolerance, seed);
                c.check = "involution k=" + std::to_string(k) + " {h_" + std::to_string(i) + ",h_" + std::to_string(j) + "}";
                report.add(c);
            }
        }
    }
    return report;
}

int numeric_rank(const JetMatrix& m, double tolerance)
{
    std::vector<double> a = m.values();
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    double scale = 0.0;
    for (double v : a) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) {
        return 0;
    }
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        std::size_t pivot = row;
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (std::abs(a[r * cols + c]) > std::abs(a[pivot * cols + c])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot * cols + c]) <= tolerance * scale) {
            continue;
        }
        for (std::size_t k = 0; k < cols; ++k) {
            std::swap(a[row * cols + k], a[pivot * cols + k]);
        }
        for (std::size_t r = row + 1; r < rows; ++r) {
            const double f = a[r * cols + c] / a[row * cols + c];
            for (std::size_t k = c; k < cols; ++k) {
                a[r * cols + k] -= f * a[row * cols + k];
            }
        }
        ++row;
        ++rank;
    }
    return rank;
}

} // namespace pncalc
