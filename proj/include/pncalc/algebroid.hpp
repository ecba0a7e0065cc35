#pragma once

// Lie algebroids over a coordinate box, trivialised by a global frame.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pncalc/exterior.hpp"
#include "pncalc/field.hpp"
#include "pncalc/jet.hpp"

namespace pncalc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sampling box, one interval per base coordinate.
using Domain = std::vector<Interval>;

/// Jets of the structure functions and the anchor at one point.
struct StructureJets {
    int rank = 0;
    int vars = 0;
    std::vector<Jet> c;   // c[(i * rank + j) * rank + k] = C_ij^k
    std::vector<Jet> rho; // rho[i * vars + u] = rho_i^u

    const Jet& C(int i, int j, int k) const
    {
        return c[(static_cast<std::size_t>(i) * rank + static_cast<std::size_t>(j)) * rank + static_cast<std::size_t>(k)];
    }
    Jet& C(int i, int j, int k)
    {
        return c[(static_cast<std::size_t>(i) * rank + static_cast<std::size_t>(j)) * rank + static_cast<std::size_t>(k)];
    }
    const Jet& anchor(int i, int u) const { return rho[static_cast<std::size_t>(i) * vars + static_cast<std::size_t>(u)]; }
    Jet& anchor(int i, int u) { return rho[static_cast<std::size_t>(i) * vars + static_cast<std::size_t>(u)]; }

    static StructureJets zero(int rank, int vars, int order);
};

class LieAlgebroid : public std::enable_shared_from_this<LieAlgebroid> {
public:
    using Evaluator = std::function<StructureJets(std::span<const double>, int)>;

    /// Structure functions for pairs i < j (0-based), one field per k. Pairs
    /// not listed are zero; C_ji = -C_ij is implied.
    using StructureMap = std::map<std::pair<int, int>, std::vector<ScalarField>>;

    static AlgebroidPtr create(std::string name, std::vector<std::string> coords, std::vector<std::string> frame,
                               Evaluator evaluator, Domain domain);

    /// anchor[i][u] = rho_i^u.
    static AlgebroidPtr from_fields(std::string name, std::vector<std::string> coords, std::vector<std::string> frame,
                                    const StructureMap& structure, const std::vector<std::vector<ScalarField>>& anchor,
                                    Domain domain);

    /// TM over the coordinate box with the coordinate frame d/dx^u.
    static AlgebroidPtr tangent(std::vector<std::string> coords, Domain domain, std::string name = {});

    /// A Lie algebra as an algebroid over a point: constants[{i,j}][k] = C_ij^k.
    static AlgebroidPtr lie_algebra(std::vector<std::string> frame, const std::map<std::pair<int, int>, std::vector<double>>& constants,
                                    std::string name = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& coords() const noexcept { return coords_; }
    const std::vector<std::string>& frame() const noexcept { return frame_; }
    int rank() const noexcept { return static_cast<int>(frame_.size()); }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    const Domain& domain() const noexcept { return domain_; }

    StructureJets structure(std::span<const double> point, int order) const;

    /// Tangent algebroid of the same base and domain (shared instance).
    AlgebroidPtr base_tangent() const;

    /// Structure functions and anchor entries as fields.
    ScalarField structure_function(int i, int j, int k) const;
    ScalarField anchor(int i, int u) const;

private:
    LieAlgebroid(std::string name, std::vector<std::string> coords, std::vector<std::string> frame,
                 Evaluator evaluator, Domain domain);

    std::string name_;
    std::vector<std::string> coords_;
    std::vector<std::string> frame_;
    Evaluator evaluator_;
    Domain domain_;
    mutable std::once_flag tangent_once_;
    mutable AlgebroidPtr tangent_;
    bool is_tangent_ = false;
};

} // namespace pncalc
