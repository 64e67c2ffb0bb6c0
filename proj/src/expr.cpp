#include "wulffkit/expr.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace wulffkit {

ExprPtr ExprNode::make_const(double c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Const;
    n->cval = c;
    return n;
}

ExprPtr ExprNode::make_var(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Var;
    n->var = index;
    return n;
}

ExprPtr ExprNode::make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Binary;
    n->bop = op;
    n->a = std::move(lhs);
    n->b = std::move(rhs);
    return n;
}

ExprPtr ExprNode::make_unary(UnFn fn, ExprPtr child) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Unary;
    n->ufn = fn;
    n->a = std::move(child);
    return n;
}

ExprPtr ExprNode::make_pow(ExprPtr base, int exponent) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Pow;
    n->exponent = exponent;
    n->a = std::move(base);
    return n;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprAst run() {
        ExprAst ast;
        ast.root = parse_expression();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected trailing input", pos_);
        ast.max_var = max_var_;
        return ast;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int max_var_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr parse_expression() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = ExprNode::make_binary(BinOp::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = ExprNode::make_binary(BinOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = ExprNode::make_binary(BinOp::Mul, lhs, parse_factor());
            else if (eat('/'))
                lhs = ExprNode::make_binary(BinOp::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    ExprPtr parse_factor() {
        if (eat('-')) {
            ExprPtr inner = parse_factor();
            // Fold negated literals so printing round-trips structurally.
            if (inner->kind == ExprNode::Kind::Const)
                return ExprNode::make_const(-inner->cval);
            return ExprNode::make_unary(UnFn::Neg, inner);
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^')) {
            skip_ws();
            std::size_t at = pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
                neg = (s_[pos_] == '-');
                ++pos_;
            }
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start)
                throw ParseError("'^' requires a constant integer exponent", at);
            int exponent = 0;
            std::from_chars(s_.data() + start, s_.data() + pos_, exponent);
            return ExprNode::make_pow(base, neg ? -exponent : exponent);
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size())
            throw ParseError("unexpected end of expression", pos_);
        char c = s_[pos_];

        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_expression();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        double value = 0.0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
        if (res.ec != std::errc())
            throw ParseError("malformed number", start);
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return ExprNode::make_const(value);
    }

    ExprPtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);

        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
            int idx = name[1] - '0';
            max_var_ = std::max(max_var_, idx);
            return ExprNode::make_var(idx - 1);
        }

        UnFn fn;
        if (name == "sqrt") fn = UnFn::Sqrt;
        else if (name == "exp") fn = UnFn::Exp;
        else if (name == "log") fn = UnFn::Log;
        else if (name == "sin") fn = UnFn::Sin;
        else if (name == "cos") fn = UnFn::Cos;
        else if (name == "abs")
            throw ParseError("'abs' is not permitted (not smooth)", start);
        else
            throw ParseError("unknown identifier '" + name + "'", start);

        if (!eat('('))
            throw ParseError("expected '(' after function name", pos_);
        ExprPtr arg = parse_expression();
        if (!eat(')'))
            throw ParseError("expected ')'", pos_);
        return ExprNode::make_unary(fn, arg);
    }
};

void print_node(const ExprNode& n, std::ostream& os) {
    switch (n.kind) {
    case ExprNode::Kind::Const: {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << n.cval;
        std::string t = tmp.str();
        if (n.cval < 0)
            os << "(" << t << ")";
        else
            os << t;
        return;
    }
    case ExprNode::Kind::Var:
        os << "x" << (n.var + 1);
        return;
    case ExprNode::Kind::Binary: {
        const char* op = n.bop == BinOp::Add   ? "+"
                         : n.bop == BinOp::Sub ? "-"
                         : n.bop == BinOp::Mul ? "*"
                                               : "/";
        os << "(";
        print_node(*n.a, os);
        os << op;
        print_node(*n.b, os);
        os << ")";
        return;
    }
    case ExprNode::Kind::Unary: {
        if (n.ufn == UnFn::Neg) {
            os << "(-";
            print_node(*n.a, os);
            os << ")";
            return;
        }
        const char* fn = n.ufn == UnFn::Sqrt ? "sqrt"
                         : n.ufn == UnFn::Exp ? "exp"
                         : n.ufn == UnFn::Log ? "log"
                         : n.ufn == UnFn::Sin ? "sin"
                                              : "cos";
        os << fn << "(";
        print_node(*n.a, os);
        os << ")";
        return;
    }
    case ExprNode::Kind::Pow:
        os << "(";
        print_node(*n.a, os);
        os << "^" << n.exponent << ")";
        return;
    }
}

bool node_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case ExprNode::Kind::Const: return a.cval == b.cval;
    case ExprNode::Kind::Var: return a.var == b.var;
    case ExprNode::Kind::Binary:
        return a.bop == b.bop && node_equal(*a.a, *b.a) && node_equal(*a.b, *b.b);
    case ExprNode::Kind::Unary: return a.ufn == b.ufn && node_equal(*a.a, *b.a);
    case ExprNode::Kind::Pow: return a.exponent == b.exponent && node_equal(*a.a, *b.a);
    }
    return false;
}

} // namespace

ExprAst parse_expr(const std::string& text) {
    return Parser(text).run();
}

std::string print_expr(const ExprAst& ast) {
    std::ostringstream os;
    if (ast.valid()) print_node(*ast.root, os);
    return os.str();
}

bool expr_equal(const ExprAst& a, const ExprAst& b) {
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    return node_equal(*a.root, *b.root);
}

Jet2 eval_jet2(const ExprAst& ast, const Eigen::VectorXd& y) {
    const int m = static_cast<int>(y.size());
    std::vector<Jet2> vars;
    vars.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) vars.push_back(Jet2::variable(y(i), i, m));
    return eval_expr<Jet2>(ast, vars);
}

double eval_value(const ExprAst& ast, const Eigen::VectorXd& y) {
    std::vector<double> vars(y.data(), y.data() + y.size());
    return eval_expr<double>(ast, vars);
}

} // namespace wulffkit
