#pragma once

// Named built-in examples, JSON configs, and the full validation suite.
//
// Built-in names: tangent-K, lie-algebra, toda-physical-N, toda-flaschka-N,
// toda-extended-N, toda-algebroid-N.
//
// Config format (indices are 1-based):
//   {
//     "name": "...", "coords": ["x", "y"], "frame": ["e1", "e2"],
//     "anchor": [["1", "0"], ["0", "x"]],          // rho_i^u, one row per frame element
//     "structure": {"1,2": ["0", "x"]},            // C_12^k, k = 1..r
//     "pi": {"1,2": "1"},                          // optional bivector
//     "N": [["x", "0"], ["0", "1"]],              // optional, row i = N(e_i)
//     "domain": {"x": [-1, 1], "y": [-1, 1]},
//     "det_domain": {...}                          // optional box with det N > 0
//   }

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pncalc/algebroid.hpp"
#include "pncalc/poisson.hpp"
#include "pncalc/report.hpp"

namespace pncalc {

struct Example {
    std::string name;
    AlgebroidPtr algebroid;
    std::optional<Multivector> pi;
    std::optional<EndomorphismField> n;

    /// Box with det N > 0, for checks involving h_0 or N^-1.
    std::optional<Domain> det_domain;

    /// PN pair driving the hierarchy and flow commands. Its base is the base
    /// of `algebroid` (for toda-flaschka-N it is the Toda algebroid).
    std::optional<PNStructure> hierarchy;

    /// Extra example-specific checks.
    std::function<Report(int points, std::uint64_t seed, double tolerance)> extra;

    std::optional<PNStructure> pn() const;
};

/// Throws ConfigError for an unknown name.
Example make_example(const std::string& name);

/// Name patterns accepted by make_example.
std::vector<std::string> example_names();

Example parse_config(std::string_view json_text, const std::string& origin = "config");
Example load_config(const std::string& path);

/// A built-in name, or a path to a JSON config.
Example resolve_example(const std::string& name_or_path);

struct ValidateOptions {
    int points = 50;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-8;
};

/// Axioms, torsion, Poisson, compatibility, modular relations, trace
/// identities, hierarchy relations and covered structures, as applicable.
Report validate_example(const Example& example, const ValidateOptions& options = {});

/// The covered bivectors pi_{k,M} = rho (N^k pi) rho* of the hierarchy.
Multivector hierarchy_base_bracket(const PNStructure& pn, int k);

} // namespace pncalc
