#include "pncalc/flows.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pncalc/algebroid.hpp"
#include "pncalc/cartan.hpp"
#include "pncalc/poisson.hpp"

namespace pncalc {

VectorField vector_field(const Multivector& field)
{
    if (field.degree() != 1) {
        throw DimensionError("vector_field needs a degree-1 multivector");
    }
    if (field.rank() != field.vars()) {
        throw DimensionError("vector_field needs a field on a tangent algebroid");
    }
    return [field](std::span<const double> x) {
        const std::vector<Jet> v = field.eval(x, 0);
        Point out;
        out.reserve(v.size());
        for (const Jet& j : v) {
            out.push_back(j.value());
        }
        return out;
    };
}

Multivector hamiltonian_flow_field(const Multivector& p, const ScalarField& h)
{
    return -sharp(p, differential(p.algebroid(), h));
}

Trajectory integrate(const VectorField& field, Point x0, double t_end, double dt, std::vector<std::string> coords)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DimensionError("integrate needs dt > 0");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw DimensionError("integrate needs a finite t_end >= 0");
    }
    const std::size_t dim = x0.size();
    Trajectory out;
    out.coords = std::move(coords);
    out.times.push_back(0.0);
    out.states.push_back(x0);
    const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    Point x = std::move(x0);
    Point tmp(dim);
    double t = 0.0;
    auto eval = [&](const Point& y) {
        try {
            Point v = field(y);
            if (v.size() != dim) {
                throw DimensionError("vector field returned the wrong dimension");
            }
            return v;
        } catch (const SingularPointError& e) {
            throw SingularPointError("trajectory singular at t = " + std::to_string(t) + ": " + e.what());
        }
    };
    for (long long s = 0; s < steps; ++s) {
        const double t_next = (s + 1 == steps) ? t_end : static_cast<double>(s + 1) * dt;
        const double h = t_next - t;
        const Point k1 = eval(x);
        for (std::size_t i = 0; i < dim; ++i) {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        const Point k2 = eval(tmp);
        for (std::size_t i = 0; i < dim; ++i) {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        const Point k3 = eval(tmp);
        for (std::size_t i = 0; i < dim; ++i) {
            tmp[i] = x[i] + h * k3[i];
        }
        const Point k4 = eval(tmp);
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(x[i])) {
                throw SingularPointError("trajectory left the finite range at t = " + std::to_string(t + h));
            }
        }
        t = t_next;
        out.times.push_back(t);
        out.states.push_back(x);
    }
    return out;
}

Trajectory integrate(const Multivector& field, Point x0, double t_end, double dt)
{
    if (static_cast<int>(x0.size()) != field.vars()) {
        throw DimensionError("initial point has " + std::to_string(x0.size()) + " coordinates, field expects " +
                             std::to_string(field.vars()));
    }
    return integrate(vector_field(field), std::move(x0), t_end, dt, field.algebroid()->coords());
}

std::vector<Drift> conservation_report(const Trajectory& trajectory,
                                       const std::vector<std::pair<std::string, ScalarField>>& functions)
{
    std::vector<Drift> out;
    for (const auto& [name, f] : functions) {
        Drift d{name, 0.0, 0.0};
        if (trajectory.states.empty()) {
            out.push_back(d);
            continue;
        }
        d.initial = f.value(trajectory.states.front());
        const double scale = std::max(1.0, std::abs(d.initial));
        for (const Point& x : trajectory.states) {
            d.drift = std::max(d.drift, std::abs(f.value(x) - d.initial) / scale);
        }
        out.push_back(d);
    }
    return out;
}

double max_deviation(const Trajectory& a, const Trajectory& b)
{
    if (a.states.size() != b.states.size()) {
        throw DimensionError("trajectories have different sample counts");
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < a.states.size(); ++s) {
        for (std::size_t i = 0; i < a.states[s].size(); ++i) {
            worst = std::max(worst, std::abs(a.states[s][i] - b.states[s][i]));
        }
    }
    return worst;
}

void write_csv(const Trajectory& trajectory, std::ostream& out, int stride)
{
    if (stride < 1) {
        throw DimensionError("csv stride must be positive");
    }
    out << "t";
    const std::size_t dim = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    for (std::size_t i = 0; i < dim; ++i) {
        out << ',' << (i < trajectory.coords.size() ? trajectory.coords[i] : "x" + std::to_string(i + 1));
    }
    out << '\n';
    std::ostringstream line;
    line << std::setprecision(17);
    const std::size_t last = trajectory.states.size() - 1;
    for (std::size_t s = 0; s < trajectory.states.size(); ++s) {
        if (s % static_cast<std::size_t>(stride) != 0 && s != last) {
            continue;
        }
        line.str({});
        line << trajectory.times[s];
        for (double v : trajectory.states[s]) {
            line << ',' << v;
        }
        out << line.str() << '\n';
    }
}

} // namespace pncalc
