#include "pncalc/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"

namespace pncalc {

void Report::append(const Report& other)
{
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool Report::pass() const
{
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; });
}

double Report::max_residual() const
{
    double m = 0.0;
    for (const CheckResult& c : checks_) {
        m = std::max(m, c.max_residual);
    }
    return m;
}

const CheckResult& Report::at(const std::string& check) const
{
    for (const CheckResult& c : checks_) {
        if (c.check == check) {
            return c;
        }
    }
    throw Error("report has no check named \"" + check + "\"");
}

std::string Report::to_text() const
{
    std::ostringstream os;
    if (!subject_.empty()) {
        os << subject_ << '\n';
    }
    std::size_t width = 5;
    for (const CheckResult& c : checks_) {
        width = std::max(width, c.check.size());
    }
    for (const CheckResult& c : checks_) {
        os << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.check << "  "
           << std::scientific << std::setprecision(3) << c.max_residual << "  (tol " << c.tolerance << ", "
           << c.points << " points)";
        if (!c.note.empty()) {
            os << "  " << c.note;
        }
        os << '\n';
    }
    os << (pass() ? "all checks passed" : "some checks FAILED") << '\n';
    return os.str();
}

std::string Report::to_json(int indent) const
{
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : checks_) {
        nlohmann::json j{{"check", c.check},   {"max_residual", c.max_residual}, {"tolerance", c.tolerance},
                         {"points", c.points}, {"seed", c.seed},                 {"pass", c.pass}};
        if (std::isnan(c.max_residual)) {
            j["max_residual"] = nullptr;
        }
        if (!c.note.empty()) {
            j["note"] = c.note;
        }
        checks.push_back(std::move(j));
    }
    nlohmann::json doc{{"schema", kReportSchema}, {"subject", subject_}, {"pass", pass()}, {"checks", checks}};
    return doc.dump(indent);
}

std::vector<Point> sample_points(const Domain& domain, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Point p;
        p.reserve(domain.size());
        for (const Interval& iv : domain) {
            // Map a 53-bit draw onto the interval; independent of the
            // standard library's distribution implementation.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p.push_back(iv.lo + (iv.hi - iv.lo) * u);
        }
        out.push_back(std::move(p));
    }
    return out;
}

CheckResult max_residual(std::string check, std::span<const Point> points, double tolerance, std::uint64_t seed,
                         const std::function<double(const Point&)>& residual)
{
    CheckResult r;
    r.check = std::move(check);
    r.tolerance = tolerance;
    r.points = static_cast<int>(points.size());
    r.seed = seed;
    bool nan = false;
    for (const Point& p : points) {
        const double v = residual(p);
        if (std::isnan(v)) {
            nan = true;
            r.max_residual = v;
            break;
        }
        r.max_residual = std::max(r.max_residual, v);
    }
    r.pass = !nan && r.max_residual < tolerance;
    return r;
}

} // namespace pncalc
