// pncalc: validate examples, tabulate hierarchies, integrate covered flows.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pncalc/examples.hpp"
#include "pncalc/flows.hpp"
#include "pncalc/hierarchy.hpp"
#include "pncalc/modular.hpp"

namespace {

using namespace pncalc;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Point parse_point(const std::string& text, int dim, const char* what)
{
    Point p;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        double v = 0.0;
        const char* b = item.data();
        while (*b == ' ') {
            ++b;
        }
        const auto [ptr, ec] = std::from_chars(b, item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw ConfigError(std::string(what) + ": cannot read \"" + item + "\" as a number");
        }
        p.push_back(v);
    }
    if (static_cast<int>(p.size()) != dim) {
        throw ConfigError(std::string(what) + ": expected " + std::to_string(dim) + " coordinates, got " +
                          std::to_string(p.size()));
    }
    return p;
}

IndexRange parse_range(const std::string& text)
{
    static const std::regex pattern(R"(^\s*(-?[0-9]+)\s*\.\.\s*(-?[0-9]+)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw ConfigError("--range expects lo..hi, got \"" + text + "\"");
    }
    IndexRange r{std::stoi(m[1]), std::stoi(m[2])};
    if (r.lo > r.hi) {
        throw ConfigError("--range is empty");
    }
    return r;
}

std::string fmt(double v)
{
    std::ostringstream s;
    s << std::setprecision(12) << (v == 0.0 ? 0.0 : v);
    return s.str();
}

std::vector<double> values(const std::vector<Jet>& t)
{
    std::vector<double> out;
    for (const Jet& j : t) {
        out.push_back(j.value());
    }
    return out;
}

const PNStructure& require_hierarchy(const Example& e)
{
    if (!e.hierarchy) {
        throw ConfigError("example \"" + e.name + "\" has no Poisson-Nijenhuis pair (needs pi and N)");
    }
    return *e.hierarchy;
}

struct ValidateArgs {
    std::string target;
    int points = 50;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-8;
    bool json = false;
    std::string report;
};

int run_validate(const ValidateArgs& a)
{
    const Example e = resolve_example(a.target);
    const Report r = validate_example(e, ValidateOptions{a.points, a.seed, a.tolerance});
    if (a.json) {
        std::cout << r.to_json() << '\n';
    } else {
        std::cout << r.to_text();
    }
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) {
            throw ConfigError("cannot write report \"" + a.report + "\"");
        }
        out << r.to_json() << '\n';
    }
    return r.pass() ? 0 : kExitFail;
}

struct HierarchyArgs {
    std::string target;
    std::string at;
    std::string range = "-2..5";
    bool json = false;
};

int run_hierarchy(const HierarchyArgs& a)
{
    const Example e = resolve_example(a.target);
    const PNStructure& pn = require_hierarchy(e);
    const AlgebroidPtr& alg = pn.algebroid();
    if (a.at.empty()) {
        throw ConfigError("point required: pass --at x1,x2,...");
    }
    const Point x = parse_point(a.at, alg->dim(), "--at");
    const IndexRange range = parse_range(a.range);

    json out;
    out["example"] = e.name;
    out["point"] = x;
    out["coords"] = alg->coords();
    out["frame"] = alg->frame();
    json hs = json::object();
    json fields = json::array();
    for (int k = range.lo; k <= range.hi; ++k) {
        hs[std::to_string(k)] = hamiltonian(pn.n, k).value(x);
    }
    for (int m = range.lo; m <= range.hi; ++m) {
        const Multivector xm = hierarchy_field(pn, m);
        fields.push_back({{"m", m}, {"section", values(xm.eval(x, 0))}, {"base", values(anchor_image(xm).eval(x, 0))}});
    }
    out["hamiltonians"] = hs;
    out["fields"] = fields;
    if (a.json) {
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "hierarchy of " << e.name << " at (" << a.at << ")\n\n";
    std::cout << std::left << std::setw(6) << "i" << "h_i\n";
    for (int k = range.lo; k <= range.hi; ++k) {
        std::cout << std::setw(6) << k << fmt(hs[std::to_string(k)].get<double>()) << '\n';
    }
    std::cout << "\nX^(m) on the frame (" ;
    for (std::size_t i = 0; i < alg->frame().size(); ++i) {
        std::cout << (i ? "," : "") << alg->frame()[i];
    }
    std::cout << ") and rho(X^(m)) on the base (";
    for (std::size_t i = 0; i < alg->coords().size(); ++i) {
        std::cout << (i ? "," : "") << alg->coords()[i];
    }
    std::cout << ")\n";
    for (const json& f : fields) {
        std::cout << "m=" << f["m"].get<int>() << "\n  X   ";
        for (double v : f["section"]) {
            std::cout << ' ' << fmt(v);
        }
        std::cout << "\n  rho ";
        for (double v : f["base"]) {
            std::cout << ' ' << fmt(v);
        }
        std::cout << '\n';
    }
    return 0;
}

struct FlowArgs {
    std::string target;
    std::string hamiltonian = "h2";
    int bracket = 0;
    std::string x0;
    double t = 10.0;
    double dt = 1e-3;
    std::string out;
    int stride = 1;
    double max_drift = -1.0;
    bool json = false;
};

int run_flow(const FlowArgs& a)
{
    const Example e = resolve_example(a.target);
    const AlgebroidPtr base = e.algebroid->base_tangent();
    const int dim = base->dim();
    if (!(a.dt > 0.0)) {
        throw ConfigError("--dt must be positive");
    }
    if (!(a.t >= 0.0)) {
        throw ConfigError("--t must be non-negative");
    }

    Multivector bracket = Multivector::zero(base, 2);
    if (e.hierarchy) {
        bracket = hierarchy_base_bracket(*e.hierarchy, a.bracket).rebind<MultivectorTag>(base);
    } else if (e.pi && a.bracket == 0) {
        bracket = covered_poisson(*e.pi);
    } else {
        throw ConfigError("--bracket " + std::to_string(a.bracket) + " needs a Poisson-Nijenhuis pair");
    }

    std::vector<std::pair<std::string, ScalarField>> monitored;
    ScalarField h;
    static const std::regex indexed(R"(^h(-?[0-9]+)$)");
    std::smatch m;
    if (std::regex_match(a.hamiltonian, m, indexed)) {
        const PNStructure& pn = require_hierarchy(e);
        h = hamiltonian(pn.n, std::stoi(m[1]));
    } else {
        try {
            h = ScalarField::parse(a.hamiltonian, base->coords());
        } catch (const ParseError& err) {
            throw ConfigError(std::string("--hamiltonian: ") + err.what());
        }
    }
    if (e.hierarchy) {
        for (int k = 1; k <= 3; ++k) {
            monitored.emplace_back("h" + std::to_string(k), hamiltonian(e.hierarchy->n, k));
        }
    }
    if (std::none_of(monitored.begin(), monitored.end(), [&](const auto& p) { return p.first == a.hamiltonian; })) {
        monitored.emplace_back(a.hamiltonian, h);
    }

    Point x0;
    if (a.x0.empty()) {
        for (const Interval& iv : base->domain()) {
            x0.push_back(0.5 * (iv.lo + iv.hi));
        }
    } else {
        x0 = parse_point(a.x0, dim, "--x0");
    }

    const Trajectory tr = integrate(hamiltonian_flow_field(bracket, h), x0, a.t, a.dt);
    if (!a.out.empty()) {
        std::ofstream out(a.out);
        if (!out) {
            throw ConfigError("cannot write \"" + a.out + "\"");
        }
        write_csv(tr, out, a.stride);
    }
    const std::vector<Drift> drifts = conservation_report(tr, monitored);
    bool ok = true;
    json j;
    j["example"] = e.name;
    j["hamiltonian"] = a.hamiltonian;
    j["bracket"] = a.bracket;
    j["steps"] = tr.states.size() - 1;
    j["final"] = tr.states.back();
    j["drift"] = json::array();
    for (const Drift& d : drifts) {
        j["drift"].push_back({{"function", d.name}, {"initial", d.initial}, {"drift", d.drift}});
        if (a.max_drift >= 0.0 && !(d.drift <= a.max_drift)) {
            ok = false;
        }
    }
    if (a.json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "flow of " << a.hamiltonian << " under bracket " << a.bracket << " on " << e.name << ", "
                  << tr.states.size() - 1 << " steps to t = " << a.t << "\n\n";
        std::cout << std::left << std::setw(10) << "function" << std::setw(22) << "initial" << "max relative drift\n";
        for (const Drift& d : drifts) {
            std::cout << std::setw(10) << d.name << std::setw(22) << fmt(d.initial) << std::scientific
                      << std::setprecision(3) << d.drift << std::defaultfloat << '\n';
        }
    }
    return ok ? 0 : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Poisson-Nijenhuis calculus on Lie algebroids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pncalc 1.0.0");

    ValidateArgs va;
    CLI::App* validate = app.add_subcommand("validate", "Run the identity suite on an example or JSON config");
    validate->add_option("example", va.target, "Built-in example name or path to a .json config")->required();
    validate->add_option("--points", va.points, "Sample points per check")->check(CLI::PositiveNumber);
    validate->add_option("--seed", va.seed, "Sampling seed");
    validate->add_option("--tolerance", va.tolerance, "Absolute tolerance")->check(CLI::PositiveNumber);
    validate->add_flag("--json", va.json, "Print the report as JSON");
    validate->add_option("--report", va.report, "Also write the JSON report to a file");

    HierarchyArgs ha;
    CLI::App* hier = app.add_subcommand("hierarchy", "Tabulate h_i and X^(m) at a point");
    hier->add_option("example", ha.target, "Built-in example name or path to a .json config")->required();
    hier->add_option("--at", ha.at, "Base point, comma separated");
    hier->add_option("--range", ha.range, "Index range lo..hi")->capture_default_str();
    hier->add_flag("--json", ha.json, "Print JSON");

    FlowArgs fa;
    CLI::App* flow = app.add_subcommand("flow", "Integrate a covered hierarchy flow with RK4");
    flow->add_option("example", fa.target, "Built-in example name or path to a .json config")->required();
    flow->add_option("--hamiltonian", fa.hamiltonian, "h<k> from the hierarchy, or an expression")->capture_default_str();
    flow->add_option("--bracket", fa.bracket, "Index k of the covered bracket pi_{k,M}")->capture_default_str();
    flow->add_option("--x0", fa.x0, "Initial point, comma separated (default: domain centre)");
    flow->add_option("--t", fa.t, "End time")->capture_default_str();
    flow->add_option("--dt", fa.dt, "Step size")->capture_default_str();
    flow->add_option("--out", fa.out, "Write the trajectory as CSV");
    flow->add_option("--stride", fa.stride, "Write every stride-th sample")->check(CLI::PositiveNumber);
    flow->add_option("--max-drift", fa.max_drift, "Exit 1 if any monitored drift exceeds this");
    flow->add_flag("--json", fa.json, "Print JSON");

    CLI::App* list = app.add_subcommand("list", "List built-in example names");

    // Values such as "-1..3" or "-0.5,1" start with a dash; glue them to
    // their option so they are not mistaken for flags.
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        const std::string s = argv[i];
        if ((s == "--range" || s == "--at" || s == "--x0") && i + 1 < argc) {
            args.push_back(s + "=" + argv[++i]);
        } else {
            args.push_back(s);
        }
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*validate) {
            return run_validate(va);
        }
        if (*hier) {
            return run_hierarchy(ha);
        }
        if (*flow) {
            return run_flow(fa);
        }
        if (*list) {
            for (const std::string& n : example_names()) {
                std::cout << n << '\n';
            }
            return 0;
        }
    } catch (const pncalc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
