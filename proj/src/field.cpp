#include "pncalc/field.hpp"

#include <sstream>

namespace pncalc {

namespace {

void check_arity(const ScalarField& a, const ScalarField& b)
{
    if (a.arity() != b.arity()) {
        throw DimensionError("scalar fields over different bases (" + std::to_string(a.arity()) + " vs " +
                             std::to_string(b.arity()) + " coordinates)");
    }
}

std::string format_number(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

ScalarField::ScalarField() : ScalarField(constant(0.0, 0)) {}

ScalarField::ScalarField(int arity, Evaluator evaluator, std::string label)
    : arity_(arity), evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))), label_(std::move(label))
{
    if (arity < 0) {
        throw DimensionError("negative arity");
    }
}

ScalarField ScalarField::constant(double value, int arity)
{
    ScalarField f(
        arity, [value, arity](std::span<const double>, int order) { return Jet::constant(value, arity, order); },
        format_number(value));
    f.constant_ = value;
    return f;
}

ScalarField ScalarField::coordinate(int index, int arity, std::string name)
{
    if (index < 0 || index >= arity) {
        throw DimensionError("coordinate index " + std::to_string(index) + " out of range");
    }
    if (name.empty()) {
        name = "x" + std::to_string(index);
    }
    return ScalarField(
        arity,
        [index, arity](std::span<const double> x, int order) {
            return Jet::variable(index, x[static_cast<std::size_t>(index)], arity, order);
        },
        std::move(name));
}

ScalarField ScalarField::from_expression(Expression expression)
{
    const int arity = static_cast<int>(expression.coords().size());
    std::string label = expression.source();
    auto shared = std::make_shared<const Expression>(std::move(expression));
    return ScalarField(
        arity, [shared](std::span<const double> x, int order) { return shared->eval(x, order); }, std::move(label));
}

ScalarField ScalarField::parse(std::string_view text, const std::vector<std::string>& coords)
{
    return from_expression(Expression::parse(text, coords));
}

Jet ScalarField::eval(std::span<const double> point, int order) const
{
    if (static_cast<int>(point.size()) != arity_) {
        throw DimensionError("field \"" + label_ + "\" expects " + std::to_string(arity_) + " coordinates, got " +
                             std::to_string(point.size()));
    }
    return (*evaluator_)(point, order);
}

ScalarField ScalarField::operator-() const
{
    if (constant_) {
        return constant(-*constant_, arity_);
    }
    return map_field(*this, [](const Jet& j) { return -j; }, "-(" + label_ + ")");
}

ScalarField map_field(const ScalarField& f, std::function<Jet(const Jet&)> op, std::string label)
{
    return ScalarField(
        f.arity(), [f, op = std::move(op)](std::span<const double> x, int order) { return op(f.eval(x, order)); },
        std::move(label));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    check_arity(a, b);
    if (a.constant_ && b.constant_) {
        return ScalarField::constant(*a.constant_ + *b.constant_, a.arity());
    }
    return ScalarField(
        a.arity(), [a, b](std::span<const double> x, int order) { return a.eval(x, order) + b.eval(x, order); },
        "(" + a.label() + " + " + b.label() + ")");
}

ScalarField operator-(const ScalarField& a, const ScalarField& b)
{
    check_arity(a, b);
    if (a.constant_ && b.constant_) {
        return ScalarField::constant(*a.constant_ - *b.constant_, a.arity());
    }
    return ScalarField(
        a.arity(), [a, b](std::span<const double> x, int order) { return a.eval(x, order) - b.eval(x, order); },
        "(" + a.label() + " - " + b.label() + ")");
}

ScalarField operator*(const ScalarField& a, const ScalarField& b)
{
    check_arity(a, b);
    if (a.constant_ && b.constant_) {
        return ScalarField::constant(*a.constant_ * *b.constant_, a.arity());
    }
    return ScalarField(
        a.arity(), [a, b](std::span<const double> x, int order) { return a.eval(x, order) * b.eval(x, order); },
        "(" + a.label() + " * " + b.label() + ")");
}

ScalarField operator/(const ScalarField& a, const ScalarField& b)
{
    check_arity(a, b);
    return ScalarField(
        a.arity(), [a, b](std::span<const double> x, int order) { return a.eval(x, order) / b.eval(x, order); },
        "(" + a.label() + " / " + b.label() + ")");
}

ScalarField operator*(double a, const ScalarField& b)
{
    return ScalarField::constant(a, b.arity()) * b;
}

ScalarField operator+(const ScalarField& a, double b)
{
    return a + ScalarField::constant(b, a.arity());
}

ScalarField exp(const ScalarField& f)
{
    return map_field(f, [](const Jet& j) { return exp(j); }, "exp(" + f.label() + ")");
}

ScalarField log(const ScalarField& f)
{
    return map_field(f, [](const Jet& j) { return log(j); }, "log(" + f.label() + ")");
}

} // namespace pncalc
