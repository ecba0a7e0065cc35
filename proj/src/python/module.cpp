#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pncalc/cartan.hpp"
#include "pncalc/errors.hpp"
#include "pncalc/examples.hpp"
#include "pncalc/flows.hpp"
#include "pncalc/hierarchy.hpp"
#include "pncalc/modular.hpp"
#include "pncalc/nijenhuis.hpp"
#include "pncalc/poisson.hpp"
#include "pncalc/toda.hpp"

namespace py = pybind11;
using namespace pncalc;

namespace {

// Python-side handle; the library shares algebroids as pointers to const.
struct Algebroid {
    AlgebroidPtr ptr;
};

Domain to_domain(const std::vector<std::pair<double, double>>& box)
{
    Domain d;
    for (const auto& [lo, hi] : box) {
        d.push_back(Interval{lo, hi});
    }
    return d;
}

std::vector<std::pair<double, double>> from_domain(const Domain& d)
{
    std::vector<std::pair<double, double>> out;
    for (const Interval& i : d) {
        out.emplace_back(i.lo, i.hi);
    }
    return out;
}

std::vector<double> values(const std::vector<Jet>& table)
{
    std::vector<double> v;
    v.reserve(table.size());
    for (const Jet& j : table) {
        v.push_back(j.value());
    }
    return v;
}

std::vector<std::vector<double>> matrix(const JetMatrix& m)
{
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i][j] = m(i, j).value();
        }
    }
    return out;
}

template <class Tag>
void bind_skew(py::module_& m, const char* name)
{
    using S = SkewField<Tag>;
    py::class_<S>(m, name)
        .def_property_readonly("degree", &S::degree)
        .def_property_readonly("rank", &S::rank)
        .def_property_readonly("label", &S::label)
        .def_property_readonly("algebroid", [](const S& s) { return Algebroid{s.algebroid()}; })
        .def("values", [](const S& s, const Point& x) { return values(s.eval(x, 0)); }, py::arg("x"),
             "Coefficients at x, increasing index tuples in lexicographic order.")
        .def("coefficient", &S::coefficient, py::arg("indices"))
        .def_static("frame", [](const Algebroid& a, std::vector<int> idx) { return S::frame(a.ptr, std::move(idx)); })
        .def_static("zero", [](const Algebroid& a, int degree) { return S::zero(a.ptr, degree); })
        .def_static("scalar", [](const Algebroid& a, const ScalarField& f) { return S::scalar(a.ptr, f); })
        .def_static("from_coefficients",
                    [](const Algebroid& a, int degree, const std::map<std::vector<int>, ScalarField>& c) {
                        return S::from_coefficients(a.ptr, degree, c);
                    })
        .def("__neg__", [](const S& s) { return -s; })
        .def("__add__", [](const S& a, const S& b) { return a + b; })
        .def("__sub__", [](const S& a, const S& b) { return a - b; })
        .def("__rmul__", [](const S& s, double c) { return c * s; })
        .def("__rmul__", [](const S& s, const ScalarField& f) { return f * s; });
}

std::vector<Point> as_points(const py::object& points, const AlgebroidPtr& a, std::uint64_t seed)
{
    if (py::isinstance<py::int_>(points)) {
        return sample_points(a->domain(), points.cast<int>(), seed);
    }
    return points.cast<std::vector<Point>>();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Lie algebroids, Poisson-Nijenhuis structures and bi-Hamiltonian hierarchies";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DimensionError>(m, "DimensionError", base);
    py::register_exception<SingularPointError>(m, "SingularPointError", base);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    py::class_<ScalarField>(m, "ScalarField")
        .def_static("parse", [](const std::string& text, const std::vector<std::string>& coords) {
            return ScalarField::parse(text, coords);
        })
        .def_static("constant", &ScalarField::constant, py::arg("value"), py::arg("arity"))
        .def_static("coordinate", &ScalarField::coordinate, py::arg("index"), py::arg("arity"), py::arg("name") = "")
        .def_property_readonly("arity", &ScalarField::arity)
        .def_property_readonly("label", &ScalarField::label)
        .def("__call__", [](const ScalarField& f, const Point& x) { return f.value(x); })
        .def("gradient",
             [](const ScalarField& f, const Point& x) {
                 const Jet j = f.eval(x, 1);
                 std::vector<double> g;
                 for (int u = 0; u < f.arity(); ++u) {
                     g.push_back(j.gradient(u));
                 }
                 return g;
             })
        .def("__neg__", [](const ScalarField& f) { return -f; })
        .def("__add__", [](const ScalarField& a, const ScalarField& b) { return a + b; })
        .def("__add__", [](const ScalarField& a, double b) { return a + b; })
        .def("__sub__", [](const ScalarField& a, const ScalarField& b) { return a - b; })
        .def("__mul__", [](const ScalarField& a, const ScalarField& b) { return a * b; })
        .def("__rmul__", [](const ScalarField& a, double b) { return b * a; })
        .def("__truediv__", [](const ScalarField& a, const ScalarField& b) { return a / b; });

    py::class_<Algebroid>(m, "Algebroid")
        .def_property_readonly("name", [](const Algebroid& a) { return a.ptr->name(); })
        .def_property_readonly("coords", [](const Algebroid& a) { return a.ptr->coords(); })
        .def_property_readonly("frame", [](const Algebroid& a) { return a.ptr->frame(); })
        .def_property_readonly("rank", [](const Algebroid& a) { return a.ptr->rank(); })
        .def_property_readonly("dim", [](const Algebroid& a) { return a.ptr->dim(); })
        .def_property_readonly("domain", [](const Algebroid& a) { return from_domain(a.ptr->domain()); })
        .def("base_tangent", [](const Algebroid& a) { return Algebroid{a.ptr->base_tangent()}; })
        .def("sample", [](const Algebroid& a, int count, std::uint64_t seed) { return sample_points(a.ptr->domain(), count, seed); },
             py::arg("count"), py::arg("seed") = kDefaultSeed)
        .def("structure",
             [](const Algebroid& a, const Point& x) {
                 const StructureJets s = a.ptr->structure(x, 0);
                 return py::make_tuple(values(s.c), values(s.rho));
             },
             "Flattened structure functions C[(i*r + j)*r + k] and anchor rho[i*n + u] at x.")
        .def("__repr__", [](const Algebroid& a) { return "<Algebroid " + a.ptr->name() + ">"; });

    m.def("tangent",
          [](std::vector<std::string> coords, const std::vector<std::pair<double, double>>& domain, std::string name) {
              return Algebroid{LieAlgebroid::tangent(std::move(coords), to_domain(domain), std::move(name))};
          },
          py::arg("coords"), py::arg("domain"), py::arg("name") = "");
    m.def("lie_algebra",
          [](std::vector<std::string> frame, const std::map<std::pair<int, int>, std::vector<double>>& constants,
             std::string name) { return Algebroid{LieAlgebroid::lie_algebra(std::move(frame), constants, std::move(name))}; },
          py::arg("frame"), py::arg("constants"), py::arg("name") = "");

    bind_skew<MultivectorTag>(m, "Multivector");
    bind_skew<FormTag>(m, "AForm");

    py::class_<EndomorphismField>(m, "EndomorphismField")
        .def_static("identity", [](const Algebroid& a) { return EndomorphismField::identity(a.ptr); })
        .def_static("from_fields", [](const Algebroid& a, const std::vector<std::vector<ScalarField>>& rows) {
            return EndomorphismField::from_fields(a.ptr, rows);
        })
        .def_property_readonly("algebroid", [](const EndomorphismField& n) { return Algebroid{n.algebroid()}; })
        .def("matrix", [](const EndomorphismField& n, const Point& x) { return matrix(n.eval(x, 0)); },
             "M[i][j] = N_i^j, row i is the image of e_i.")
        .def("entry", &EndomorphismField::entry)
        .def("trace", &EndomorphismField::trace)
        .def("det", &EndomorphismField::det)
        .def("power", &EndomorphismField::power)
        .def("shift", &EndomorphismField::shift)
        .def("apply", &EndomorphismField::apply)
        .def("dual_apply", &EndomorphismField::dual_apply);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("check", &CheckResult::check)
        .def_readonly("max_residual", &CheckResult::max_residual)
        .def_readonly("tolerance", &CheckResult::tolerance)
        .def_readonly("points", &CheckResult::points)
        .def_readonly("seed", &CheckResult::seed)
        .def_readonly("passed", &CheckResult::pass)
        .def_readonly("note", &CheckResult::note)
        .def("__bool__", [](const CheckResult& r) { return r.pass; });

    py::class_<Report>(m, "Report")
        .def_property_readonly("subject", &Report::subject)
        .def_property_readonly("checks", &Report::checks)
        .def_property_readonly("passed", &Report::pass)
        .def_property_readonly("max_residual", &Report::max_residual)
        .def("at", &Report::at)
        .def("to_text", &Report::to_text)
        .def("to_json", &Report::to_json, py::arg("indent") = 2)
        .def("__bool__", &Report::pass);

    m.def("sample_points",
          [](const std::vector<std::pair<double, double>>& box, int count, std::uint64_t seed) {
              return sample_points(to_domain(box), count, seed);
          },
          py::arg("box"), py::arg("count"), py::arg("seed") = kDefaultSeed);

    // Calculus on the algebroid.
    m.def("differential", [](const Algebroid& a, const ScalarField& f) { return differential(a.ptr, f); });
    m.def("differential", py::overload_cast<const AForm&>(&differential));
    m.def("section_bracket", &section_bracket);
    m.def("schouten", &schouten);
    m.def("anchor_action", py::overload_cast<const Multivector&, const ScalarField&>(&anchor_action));
    m.def("lie_derivative", &lie_derivative);
    m.def("wedge", &wedge<MultivectorTag>);
    m.def("wedge", &wedge<FormTag>);
    m.def("interior", py::overload_cast<const Multivector&, const AForm&>(&interior));
    m.def("interior", py::overload_cast<const AForm&, const Multivector&>(&interior));
    m.def("validate_axioms",
          [](const Algebroid& a, int points, std::uint64_t seed, double tol) { return validate_axioms(a.ptr, points, seed, tol); },
          py::arg("algebroid"), py::arg("points") = 50, py::arg("seed") = kDefaultSeed, py::arg("tolerance") = 1e-9);

    // Nijenhuis operators.
    m.def("deformed_bracket", &deformed_bracket);
    m.def("torsion", &torsion);
    m.def("torsion_residual",
          [](const EndomorphismField& n, const py::object& points, double tol, std::uint64_t seed) {
              return torsion_residual(n, as_points(points, n.algebroid(), seed), tol, seed);
          },
          py::arg("n"), py::arg("points") = 50, py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);
    m.def("deform", [](const EndomorphismField& n, std::string name) { return Algebroid{deform(n, std::move(name))}; },
          py::arg("n"), py::arg("name") = "");
    m.def("trace_identity",
          [](const EndomorphismField& n, int k, const py::object& points, double tol, std::uint64_t seed) {
              return trace_identity(n, k, as_points(points, n.algebroid(), seed), tol, seed);
          },
          py::arg("n"), py::arg("m"), py::arg("points") = 50, py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);

    // Poisson structures.
    m.def("sharp", &sharp);
    m.def("poisson_bracket", &poisson_bracket);
    m.def("is_poisson",
          [](const Multivector& pi, const py::object& points, double tol, std::uint64_t seed) {
              return is_poisson(pi, as_points(points, pi.algebroid(), seed), tol, seed);
          },
          py::arg("pi"), py::arg("points") = 50, py::arg("tolerance") = 1e-9, py::arg("seed") = kDefaultSeed);
    m.def("dual_algebroid", [](const Multivector& pi, std::string name) { return Algebroid{dual_algebroid(pi, std::move(name))}; },
          py::arg("pi"), py::arg("name") = "");
    m.def("d_pi", &d_pi);
    m.def("hierarchy_bivector", &hierarchy_bivector);
    m.def("compatibility",
          [](const Multivector& pi, const EndomorphismField& n, const py::object& points, double tol, std::uint64_t seed) {
              return compatibility(pi, n, as_points(points, pi.algebroid(), seed), tol, seed);
          },
          py::arg("pi"), py::arg("n"), py::arg("points") = 50, py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);
    m.def("covered_poisson", &covered_poisson);
    m.def("anchor_image", &anchor_image);
    m.def("hamiltonian_vf", &hamiltonian_vf);
    m.def("recursion_operator", &recursion_operator);

    py::class_<PNStructure>(m, "PNStructure")
        .def(py::init<std::string, Multivector, EndomorphismField>(), py::arg("name"), py::arg("pi"), py::arg("n"))
        .def_readonly("name", &PNStructure::name)
        .def_readonly("pi", &PNStructure::pi)
        .def_readonly("n", &PNStructure::n)
        .def_property_readonly("algebroid", [](const PNStructure& p) { return Algebroid{p.algebroid()}; })
        .def("check",
             [](const PNStructure& p, const py::object& points, double tol, std::uint64_t seed) {
                 return p.check(as_points(points, p.algebroid(), seed), tol, seed);
             },
             py::arg("points") = 50, py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);

    // Modular classes.
    py::enum_<ModularMethod>(m, "ModularMethod")
        .value("Local", ModularMethod::Local)
        .value("Definition", ModularMethod::Definition);
    m.def("modular_form", [](const Algebroid& a, ModularMethod method) { return modular_form(a.ptr, method); },
          py::arg("algebroid"), py::arg("method") = ModularMethod::Local);
    m.def("rescale_check",
          [](const Algebroid& a, const ScalarField& f, const py::object& points, double tol, std::uint64_t seed) {
              return rescale_check(a.ptr, f, as_points(points, a.ptr, seed), tol, seed);
          },
          py::arg("algebroid"), py::arg("f"), py::arg("points") = 50, py::arg("tolerance") = 1e-10,
          py::arg("seed") = kDefaultSeed);
    m.def("relative_modular_rep", &relative_modular_rep);
    m.def("modular_deformation_check",
          [](const EndomorphismField& n, const py::object& points, double tol, std::uint64_t seed) {
              return modular_deformation_check(n, as_points(points, n.algebroid(), seed), tol, seed);
          },
          py::arg("n"), py::arg("points") = 50, py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);
    m.def("pn_modular_vector_field", &pn_modular_vector_field);

    // Hierarchy.
    m.def("hamiltonian", &hamiltonian);
    m.def("hamiltonians", [](const EndomorphismField& n, int lo, int hi) { return hamiltonians(n, IndexRange{lo, hi}); },
          py::arg("n"), py::arg("lo") = -2, py::arg("hi") = 5);
    m.def("hierarchy_field", &hierarchy_field);
    m.def("hierarchy_term", &hierarchy_term);
    m.def("hierarchy_check",
          [](const PNStructure& pn, int mm, int lo, int hi, const py::object& points, double tol, std::uint64_t seed) {
              return hierarchy_check(pn, mm, IndexRange{lo, hi}, as_points(points, pn.algebroid(), seed), tol, seed);
          },
          py::arg("pn"), py::arg("m"), py::arg("lo") = -2, py::arg("hi") = 4, py::arg("points") = 50,
          py::arg("tolerance") = 1e-8, py::arg("seed") = kDefaultSeed);
    m.def("covered_hierarchy", &covered_hierarchy);
    m.def("involution_check",
          [](const PNStructure& pn, int hmax, int kmax, const py::object& points, double tol, std::uint64_t seed) {
              return involution_check(pn, hmax, kmax, as_points(points, pn.algebroid(), seed), tol, seed);
          },
          py::arg("pn"), py::arg("hmax") = 3, py::arg("kmax") = 2, py::arg("points") = 50, py::arg("tolerance") = 1e-9,
          py::arg("seed") = kDefaultSeed);

    // Toda lattice.
    py::class_<TodaPhysical>(m, "TodaPhysical")
        .def_readonly("n", &TodaPhysical::n)
        .def_readonly("pn", &TodaPhysical::pn)
        .def_readonly("pi1", &TodaPhysical::pi1)
        .def_readonly("hamiltonian", &TodaPhysical::hamiltonian)
        .def_readonly("momentum", &TodaPhysical::momentum);
    py::class_<TodaAlgebroid>(m, "TodaAlgebroid")
        .def_readonly("n", &TodaAlgebroid::n)
        .def_readonly("pn", &TodaAlgebroid::pn)
        .def_readonly("pi1", &TodaAlgebroid::pi1);
    py::class_<TodaFlaschka>(m, "TodaFlaschka")
        .def_readonly("n", &TodaFlaschka::n)
        .def_readonly("pi0", &TodaFlaschka::pi0)
        .def_readonly("pi1", &TodaFlaschka::pi1);
    m.def("toda_physical", &toda_physical);
    m.def("toda_algebroid", &toda_algebroid);
    m.def("toda_extended_flaschka", &toda_extended_flaschka);
    m.def("toda_flaschka_reduced", &toda_flaschka_reduced);
    m.def("flaschka_point", [](const Point& qp) { return flaschka_point(qp); });
    m.def("bivector_rank", [](const Multivector& pi, const Point& x) { return bivector_rank(pi, x); });

    // Flows.
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("coords", &Trajectory::coords)
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states);
    m.def("hamiltonian_flow_field", &hamiltonian_flow_field);
    m.def("integrate", py::overload_cast<const Multivector&, Point, double, double>(&integrate), py::arg("field"),
          py::arg("x0"), py::arg("t_end"), py::arg("dt"));
    m.def("conservation_report",
          [](const Trajectory& tr, const std::map<std::string, ScalarField>& functions) {
              std::vector<std::pair<std::string, ScalarField>> list(functions.begin(), functions.end());
              std::map<std::string, std::pair<double, double>> out;
              for (const Drift& d : conservation_report(tr, list)) {
                  out[d.name] = {d.initial, d.drift};
              }
              return out;
          },
          "Maps each name to (initial value, max relative drift).");
    m.def("max_deviation", &max_deviation);

    // Examples and validation.
    py::class_<Example>(m, "Example")
        .def_readonly("name", &Example::name)
        .def_property_readonly("algebroid", [](const Example& e) { return Algebroid{e.algebroid}; })
        .def_readonly("pi", &Example::pi)
        .def_readonly("n", &Example::n)
        .def("pn", &Example::pn);
    m.def("make_example", &make_example);
    m.def("example_names", &example_names);
    m.def("load_config", &load_config);
    m.def("parse_config", [](const std::string& text) { return parse_config(text); });
    m.def("validate_example",
          [](const Example& e, int points, std::uint64_t seed, double tol) {
              return validate_example(e, ValidateOptions{points, seed, tol});
          },
          py::arg("example"), py::arg("points") = 50, py::arg("seed") = kDefaultSeed, py::arg("tolerance") = 1e-8);
}
