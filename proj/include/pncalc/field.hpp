#pragma once

// Smooth functions on a coordinate patch, evaluable to jets.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pncalc/expr.hpp"
#include "pncalc/jet.hpp"

namespace pncalc {

class ScalarField {
public:
    using Evaluator = std::function<Jet(std::span<const double>, int)>;

    /// The zero function on a point (arity 0).
    ScalarField();
    ScalarField(int arity, Evaluator evaluator, std::string label);

    static ScalarField constant(double value, int arity);
    static ScalarField coordinate(int index, int arity, std::string name = {});
    static ScalarField from_expression(Expression expression);
    static ScalarField parse(std::string_view text, const std::vector<std::string>& coords);

    int arity() const noexcept { return arity_; }
    const std::string& label() const noexcept { return label_; }

    /// Set for fields built by constant(); lets callers skip work on zeros.
    const std::optional<double>& constant_value() const noexcept { return constant_; }

    Jet eval(std::span<const double> point, int order) const;
    double value(std::span<const double> point) const { return eval(point, 0).value(); }

    ScalarField operator-() const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double a, const ScalarField& b);
    friend ScalarField operator+(const ScalarField& a, double b);

private:
    int arity_ = 0;
    std::shared_ptr<const Evaluator> evaluator_;
    std::string label_;
    std::optional<double> constant_;
};

ScalarField exp(const ScalarField& f);
ScalarField log(const ScalarField& f);

/// Applies a jet-level map to one field.
ScalarField map_field(const ScalarField& f, std::function<Jet(const Jet&)> op, std::string label);

} // namespace pncalc
