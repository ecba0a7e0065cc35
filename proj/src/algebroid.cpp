#include "pncalc/algebroid.hpp"

#include <set>

namespace pncalc {

StructureJets StructureJets::zero(int rank, int vars, int order)
{
    StructureJets s;
    s.rank = rank;
    s.vars = vars;
    const Jet z = Jet::zero(vars, order);
    s.c.assign(static_cast<std::size_t>(rank) * rank * rank, z);
    s.rho.assign(static_cast<std::size_t>(rank) * vars, z);
    return s;
}

LieAlgebroid::LieAlgebroid(std::string name, std::vector<std::string> coords, std::vector<std::string> frame,
                           Evaluator evaluator, Domain domain)
    : name_(std::move(name)), coords_(std::move(coords)), frame_(std::move(frame)), evaluator_(std::move(evaluator)),
      domain_(std::move(domain))
{
    if (frame_.empty()) {
        throw DimensionError("algebroid \"" + name_ + "\" has rank 0");
    }
    (void)SubsetIndex::get(rank());
    if (domain_.size() != coords_.size()) {
        throw DimensionError("algebroid \"" + name_ + "\": domain needs one interval per coordinate");
    }
    for (std::size_t u = 0; u < domain_.size(); ++u) {
        if (!(domain_[u].lo <= domain_[u].hi)) {
            throw DimensionError("algebroid \"" + name_ + "\": empty interval for " + coords_[u]);
        }
    }
    std::set<std::string> seen(coords_.begin(), coords_.end());
    if (seen.size() != coords_.size()) {
        throw DimensionError("algebroid \"" + name_ + "\": duplicate coordinate names");
    }
}

AlgebroidPtr LieAlgebroid::create(std::string name, std::vector<std::string> coords, std::vector<std::string> frame,
                                  Evaluator evaluator, Domain domain)
{
    return AlgebroidPtr(
        new LieAlgebroid(std::move(name), std::move(coords), std::move(frame), std::move(evaluator), std::move(domain)));
}

AlgebroidPtr LieAlgebroid::from_fields(std::string name, std::vector<std::string> coords,
                                       std::vector<std::string> frame, const StructureMap& structure,
                                       const std::vector<std::vector<ScalarField>>& anchor, Domain domain)
{
    const int r = static_cast<int>(frame.size());
    const int n = static_cast<int>(coords.size());
    struct Entry {
        int i;
        int j;
        int k;
        ScalarField f;
    };
    std::vector<Entry> entries;
    for (const auto& [pair, fields] : structure) {
        const auto [i, j] = pair;
        if (i < 0 || j < 0 || i >= r || j >= r || i == j) {
            throw DimensionError("structure pair (" + std::to_string(i) + "," + std::to_string(j) + ") invalid");
        }
        if (static_cast<int>(fields.size()) != r) {
            throw DimensionError("structure pair needs one function per frame element");
        }
        for (int k = 0; k < r; ++k) {
            const ScalarField& f = fields[static_cast<std::size_t>(k)];
            if (f.arity() != n) {
                throw DimensionError("structure function arity does not match the base dimension");
            }
            if (f.constant_value() && *f.constant_value() == 0.0) {
                continue;
            }
            entries.push_back(i < j ? Entry{i, j, k, f} : Entry{j, i, k, -f});
        }
    }
    if (static_cast<int>(anchor.size()) != r) {
        throw DimensionError("anchor needs one row per frame element");
    }
    struct AnchorEntry {
        int i;
        int u;
        ScalarField f;
    };
    std::vector<AnchorEntry> rho;
    for (int i = 0; i < r; ++i) {
        const auto& row = anchor[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != n) {
            throw DimensionError("anchor row needs one function per coordinate");
        }
        for (int u = 0; u < n; ++u) {
            const ScalarField& f = row[static_cast<std::size_t>(u)];
            if (f.arity() != n) {
                throw DimensionError("anchor entry arity does not match the base dimension");
            }
            if (f.constant_value() && *f.constant_value() == 0.0) {
                continue;
            }
            rho.push_back({i, u, f});
        }
    }
    auto evaluator = [entries = std::move(entries), rho = std::move(rho), r, n](std::span<const double> x, int order) {
        StructureJets s = StructureJets::zero(r, n, order);
        for (const Entry& e : entries) {
            const Jet v = e.f.eval(x, order);
            s.C(e.i, e.j, e.k) += v;
            s.C(e.j, e.i, e.k) -= v;
        }
        for (const AnchorEntry& a : rho) {
            s.anchor(a.i, a.u) += a.f.eval(x, order);
        }
        return s;
    };
    return create(std::move(name), std::move(coords), std::move(frame), std::move(evaluator), std::move(domain));
}

AlgebroidPtr LieAlgebroid::tangent(std::vector<std::string> coords, Domain domain, std::string name)
{
    const int n = static_cast<int>(coords.size());
    std::vector<std::string> frame;
    for (const std::string& c : coords) {
        frame.push_back("d/d" + c);
    }
    if (name.empty()) {
        name = "tangent";
    }
    auto evaluator = [n](std::span<const double>, int order) {
        StructureJets s = StructureJets::zero(n, n, order);
        for (int u = 0; u < n; ++u) {
            s.anchor(u, u) = Jet::constant(1.0, n, order);
        }
        return s;
    };
    AlgebroidPtr a = create(std::move(name), std::move(coords), std::move(frame), std::move(evaluator), std::move(domain));
    const_cast<LieAlgebroid&>(*a).is_tangent_ = true;
    return a;
}

AlgebroidPtr LieAlgebroid::lie_algebra(std::vector<std::string> frame,
                                       const std::map<std::pair<int, int>, std::vector<double>>& constants,
                                       std::string name)
{
    StructureMap structure;
    for (const auto& [pair, values] : constants) {
        std::vector<ScalarField> fields;
        for (double v : values) {
            fields.push_back(ScalarField::constant(v, 0));
        }
        structure[pair] = std::move(fields);
    }
    std::vector<std::vector<ScalarField>> anchor(frame.size());
    if (name.empty()) {
        name = "lie-algebra";
    }
    return from_fields(std::move(name), {}, std::move(frame), structure, anchor, {});
}

StructureJets LieAlgebroid::structure(std::span<const double> point, int order) const
{
    if (static_cast<int>(point.size()) != dim()) {
        throw DimensionError("algebroid \"" + name_ + "\" expects " + std::to_string(dim()) + " coordinates, got " +
                             std::to_string(point.size()));
    }
    return evaluator_(point, order);
}

AlgebroidPtr LieAlgebroid::base_tangent() const
{
    if (is_tangent_) {
        return shared_from_this();
    }
    std::call_once(tangent_once_, [this] { tangent_ = tangent(coords_, domain_, "T(" + name_ + ")"); });
    return tangent_;
}

ScalarField LieAlgebroid::structure_function(int i, int j, int k) const
{
    const int r = rank();
    if (i < 0 || j < 0 || k < 0 || i >= r || j >= r || k >= r) {
        throw DimensionError("structure index out of range");
    }
    AlgebroidPtr self = shared_from_this();
    return ScalarField(
        dim(), [self, i, j, k](std::span<const double> x, int order) { return self->structure(x, order).C(i, j, k); },
        "C_" + std::to_string(i) + std::to_string(j) + "^" + std::to_string(k));
}

ScalarField LieAlgebroid::anchor(int i, int u) const
{
    if (i < 0 || u < 0 || i >= rank() || u >= dim()) {
        throw DimensionError("anchor index out of range");
    }
    AlgebroidPtr self = shared_from_this();
    return ScalarField(
        dim(), [self, i, u](std::span<const double> x, int order) { return self->structure(x, order).anchor(i, u); },
        "rho_" + std::to_string(i) + "^" + std::to_string(u));
}

} // namespace pncalc
