#pragma once

// A small expression language for structure functions, anchors, bivector
// coefficients and endomorphism entries.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]          (right associative)
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//   ident   := [A-Za-z][A-Za-z0-9_]*
//   number  := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
//
// Functions: exp, log, sin, cos. The right operand of '^' must fold to an
// integer constant. Whitespace is insignificant.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pncalc/errors.hpp"
#include "pncalc/jet.hpp"

namespace pncalc {

enum class ExprKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };
enum class ExprFunction { Exp, Log, Sin, Cos };

struct ExprNode {
    ExprKind kind;
    std::size_t offset = 0; // byte offset of the node in the source text
    double number = 0.0;
    int variable = -1;
    int exponent = 0;
    ExprFunction function = ExprFunction::Exp;
    std::vector<std::shared_ptr<const ExprNode>> children;
};

class Expression {
public:
    static Expression parse(std::string_view text, std::vector<std::string> coords);

    /// Jet of the expression at a point. Singular evaluations are reported
    /// with the byte offset of the failing node.
    Jet eval(std::span<const double> point, int order) const;

    /// Plain real-valued evaluation, independent of the jet path.
    double eval_real(std::span<const double> point) const;

    /// Canonical fully parenthesised form; re-parsing it reproduces the AST.
    std::string print() const;

    const ExprNode& root() const { return *root_; }
    const std::vector<std::string>& coords() const { return *coords_; }
    const std::string& source() const { return source_; }

    /// Structural AST equality (node offsets are ignored).
    friend bool operator==(const Expression& a, const Expression& b);

private:
    Expression(std::shared_ptr<const ExprNode> root, std::shared_ptr<const std::vector<std::string>> coords,
               std::string source);

    std::shared_ptr<const ExprNode> root_;
    std::shared_ptr<const std::vector<std::string>> coords_;
    std::string source_;
};

} // namespace pncalc
