#include "pncalc/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace pncalc {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprKind kind, std::size_t offset, std::vector<NodePtr> children = {})
{
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->offset = offset;
    n->children = std::move(children);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& coords) : text_(text)
    {
        for (std::size_t i = 0; i < coords.size(); ++i) {
            index_.emplace(coords[i], static_cast<int>(i));
        }
    }

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (pos_ != text_.size()) {
            throw ParseError("syntax error: unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return e;
    }

private:
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            skip();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = make(ExprKind::Add, at, {lhs, term()});
            } else if (accept('-')) {
                lhs = make(ExprKind::Subtract, at, {lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            skip();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = make(ExprKind::Multiply, at, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(ExprKind::Divide, at, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary()
    {
        skip();
        const std::size_t at = pos_;
        if (accept('-')) {
            return make(ExprKind::Negate, at, {unary()});
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        skip();
        const std::size_t at = pos_;
        if (!accept('^')) {
            return base;
        }
        skip();
        const std::size_t exp_at = pos_;
        NodePtr e = unary();
        const double v = fold(*e, exp_at);
        if (v != std::floor(v) || std::abs(v) > 1e6) {
            throw ParseError("non-integer exponent", exp_at);
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Power;
        n->offset = at;
        n->exponent = static_cast<int>(v);
        n->children = {base};
        return n;
    }

    double fold(const ExprNode& n, std::size_t at) const
    {
        switch (n.kind) {
        case ExprKind::Number:
            return n.number;
        case ExprKind::Negate:
            return -fold(*n.children[0], at);
        case ExprKind::Power:
            return std::pow(fold(*n.children[0], at), n.exponent);
        default:
            throw ParseError("non-integer exponent (exponent must be an integer constant)", at);
        }
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= text_.size()) {
            throw ParseError("syntax error: unexpected end of input", pos_);
        }
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) {
                throw ParseError("syntax error: expected ')'", pos_);
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
                ++end;
            }
            const std::string name(text_.substr(pos_, end - pos_));
            pos_ = end;
            skip();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ExprFunction f;
                if (name == "exp") {
                    f = ExprFunction::Exp;
                } else if (name == "log") {
                    f = ExprFunction::Log;
                } else if (name == "sin") {
                    f = ExprFunction::Sin;
                } else if (name == "cos") {
                    f = ExprFunction::Cos;
                } else {
                    throw ParseError("unknown function \"" + name + "\"", at);
                }
                ++pos_;
                NodePtr arg = expr();
                if (!accept(')')) {
                    throw ParseError("syntax error: expected ')'", pos_);
                }
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprKind::Call;
                n->offset = at;
                n->function = f;
                n->children = {arg};
                return n;
            }
            auto it = index_.find(name);
            if (it == index_.end()) {
                throw ParseError("unbound identifier \"" + name + "\"", at);
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprKind::Variable;
            n->offset = at;
            n->variable = it->second;
            return n;
        }
        throw ParseError("syntax error: unexpected '" + std::string(1, c) + "'", at);
    }

    NodePtr number()
    {
        const std::size_t at = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            const std::size_t start = end;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
                ++end;
            }
            return end - start;
        };
        std::size_t count = digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            count += digits();
        }
        if (count == 0) {
            throw ParseError("syntax error: malformed number", at);
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t save = end;
            ++end;
            if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) {
                ++end;
            }
            if (digits() == 0) {
                end = save; // not an exponent; leave 'e' for the caller to reject
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
        if (ec != std::errc() || !std::isfinite(v)) {
            throw ParseError("number out of range", at);
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Number;
        n->offset = at;
        n->number = v;
        return n;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, int> index_;
};

class JetEvaluator {
public:
    JetEvaluator(std::span<const double> point, int order, const std::string& source)
        : point_(point), order_(order), source_(source)
    {}

    Jet operator()(const ExprNode& n) const
    {
        const int vars = static_cast<int>(point_.size());
        switch (n.kind) {
        case ExprKind::Number:
            return Jet::constant(n.number, vars, order_);
        case ExprKind::Variable:
            return Jet::variable(n.variable, point_[static_cast<std::size_t>(n.variable)], vars, order_);
        case ExprKind::Negate:
            return -(*this)(*n.children[0]);
        case ExprKind::Add:
            return (*this)(*n.children[0]) + (*this)(*n.children[1]);
        case ExprKind::Subtract:
            return (*this)(*n.children[0]) - (*this)(*n.children[1]);
        case ExprKind::Multiply:
            return (*this)(*n.children[0]) * (*this)(*n.children[1]);
        default:
            break;
        }
        try {
            switch (n.kind) {
            case ExprKind::Divide:
                return (*this)(*n.children[0]) / (*this)(*n.children[1]);
            case ExprKind::Power:
                return pow((*this)(*n.children[0]), n.exponent);
            case ExprKind::Call: {
                const Jet a = (*this)(*n.children[0]);
                switch (n.function) {
                case ExprFunction::Exp:
                    return exp(a);
                case ExprFunction::Log:
                    return log(a);
                case ExprFunction::Sin:
                    return sin(a);
                case ExprFunction::Cos:
                    return cos(a);
                }
                break;
            }
            default:
                break;
            }
        } catch (const SingularPointError& e) {
            if (std::string(e.what()).find(" [at offset ") != std::string::npos) {
                throw;
            }
            throw SingularPointError(std::string(e.what()) + " [at offset " + std::to_string(n.offset) +
                                     " in \"" + source_ + "\"]");
        }
        throw Error("corrupt expression node");
    }

private:
    std::span<const double> point_;
    int order_;
    const std::string& source_;
};

double eval_real_node(const ExprNode& n, std::span<const double> x)
{
    switch (n.kind) {
    case ExprKind::Number:
        return n.number;
    case ExprKind::Variable:
        return x[static_cast<std::size_t>(n.variable)];
    case ExprKind::Negate:
        return -eval_real_node(*n.children[0], x);
    case ExprKind::Add:
        return eval_real_node(*n.children[0], x) + eval_real_node(*n.children[1], x);
    case ExprKind::Subtract:
        return eval_real_node(*n.children[0], x) - eval_real_node(*n.children[1], x);
    case ExprKind::Multiply:
        return eval_real_node(*n.children[0], x) * eval_real_node(*n.children[1], x);
    case ExprKind::Divide:
        return eval_real_node(*n.children[0], x) / eval_real_node(*n.children[1], x);
    case ExprKind::Power:
        return std::pow(eval_real_node(*n.children[0], x), n.exponent);
    case ExprKind::Call: {
        const double a = eval_real_node(*n.children[0], x);
        switch (n.function) {
        case ExprFunction::Exp:
            return std::exp(a);
        case ExprFunction::Log:
            return std::log(a);
        case ExprFunction::Sin:
            return std::sin(a);
        case ExprFunction::Cos:
            return std::cos(a);
        }
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void print_node(const ExprNode& n, const std::vector<std::string>& coords, std::ostream& os)
{
    auto binary = [&](const char* op) {
        os << '(';
        print_node(*n.children[0], coords, os);
        os << ' ' << op << ' ';
        print_node(*n.children[1], coords, os);
        os << ')';
    };
    switch (n.kind) {
    case ExprKind::Number: {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n.number);
        os << std::string_view(buf, static_cast<std::size_t>(end - buf));
        break;
    }
    case ExprKind::Variable:
        os << coords[static_cast<std::size_t>(n.variable)];
        break;
    case ExprKind::Negate:
        os << "(-";
        print_node(*n.children[0], coords, os);
        os << ')';
        break;
    case ExprKind::Add:
        binary("+");
        break;
    case ExprKind::Subtract:
        binary("-");
        break;
    case ExprKind::Multiply:
        binary("*");
        break;
    case ExprKind::Divide:
        binary("/");
        break;
    case ExprKind::Power:
        os << '(';
        print_node(*n.children[0], coords, os);
        if (n.exponent < 0) {
            os << "^(" << n.exponent << "))";
        } else {
            os << '^' << n.exponent << ')';
        }
        break;
    case ExprKind::Call: {
        static constexpr const char* names[] = {"exp", "log", "sin", "cos"};
        os << names[static_cast<int>(n.function)] << '(';
        print_node(*n.children[0], coords, os);
        os << ')';
        break;
    }
    }
}

bool same_tree(const ExprNode& a, const ExprNode& b)
{
    if (a.kind != b.kind || a.children.size() != b.children.size()) {
        return false;
    }
    switch (a.kind) {
    case ExprKind::Number:
        if (a.number != b.number) {
            return false;
        }
        break;
    case ExprKind::Variable:
        if (a.variable != b.variable) {
            return false;
        }
        break;
    case ExprKind::Power:
        if (a.exponent != b.exponent) {
            return false;
        }
        break;
    case ExprKind::Call:
        if (a.function != b.function) {
            return false;
        }
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!same_tree(*a.children[i], *b.children[i])) {
            return false;
        }
    }
    return true;
}

} // namespace

Expression::Expression(std::shared_ptr<const ExprNode> root, std::shared_ptr<const std::vector<std::string>> coords,
                       std::string source)
    : root_(std::move(root)), coords_(std::move(coords)), source_(std::move(source))
{}

Expression Expression::parse(std::string_view text, std::vector<std::string> coords)
{
    Parser p(text, coords);
    NodePtr root = p.parse();
    return Expression(std::move(root), std::make_shared<const std::vector<std::string>>(std::move(coords)),
                      std::string(text));
}

Jet Expression::eval(std::span<const double> point, int order) const
{
    if (point.size() != coords_->size()) {
        throw DimensionError("expression expects " + std::to_string(coords_->size()) + " coordinates, got " +
                             std::to_string(point.size()));
    }
    return JetEvaluator(point, order, source_)(*root_);
}

double Expression::eval_real(std::span<const double> point) const
{
    if (point.size() != coords_->size()) {
        throw DimensionError("expression expects " + std::to_string(coords_->size()) + " coordinates");
    }
    return eval_real_node(*root_, point);
}

std::string Expression::print() const
{
    std::ostringstream os;
    print_node(*root_, *coords_, os);
    return os.str();
}

bool operator==(const Expression& a, const Expression& b)
{
    return *a.coords_ == *b.coords_ && same_tree(*a.root_, *b.root_);
}

} // namespace pncalc
