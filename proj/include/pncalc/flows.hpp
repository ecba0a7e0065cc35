#pragma once

// Fixed-step RK4 integration of base vector fields and drift monitoring of
// first integrals.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pncalc/exterior.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

using VectorField = std::function<Point(std::span<const double>)>;

struct Trajectory {
    std::vector<std::string> coords;
    std::vector<double> times;
    std::vector<Point> states;
};

/// Plain evaluation of a degree-1 multivector on a tangent algebroid.
VectorField vector_field(const Multivector& field);

/// The flow field d_P h = -P^sharp d h of a base bivector P.
Multivector hamiltonian_flow_field(const Multivector& p, const ScalarField& h);

/// Classical RK4 with step dt; the last step is shortened to land on t_end.
/// Throws SingularPointError (with the failure time) if the field cannot be
/// evaluated or the state stops being finite.
Trajectory integrate(const VectorField& field, Point x0, double t_end, double dt, std::vector<std::string> coords = {});
Trajectory integrate(const Multivector& field, Point x0, double t_end, double dt);

struct Drift {
    std::string name;
    double initial = 0.0;
    double drift = 0.0; // max |f(x(t)) - f(x0)| / max(1, |f(x0)|)
};

std::vector<Drift> conservation_report(const Trajectory& trajectory,
                                       const std::vector<std::pair<std::string, ScalarField>>& functions);

/// Largest coordinate difference between two trajectories on the same grid.
double max_deviation(const Trajectory& a, const Trajectory& b);

/// Header "t,<coords>", then every stride-th sample and the final one.
void write_csv(const Trajectory& trajectory, std::ostream& out, int stride = 1);

} // namespace pncalc
