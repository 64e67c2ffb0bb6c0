#pragma once

#include <memory>
#include <span>
#include <string>

#include "wulffkit/jets.hpp"

namespace wulffkit {

// Expression tree for the F / rho mini-language. Nodes are immutable after
// parse; evaluation is pure and generic over the scalar type (double, Jet2,
// DualN<...>), so one tree serves values, gradients and Hessians alike.

enum class BinOp { Add, Sub, Mul, Div };
enum class UnFn { Neg, Sqrt, Exp, Log, Sin, Cos };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Const, Var, Binary, Unary, Pow };

    Kind kind = Kind::Const;
    double cval = 0.0; // Const
    int var = 0;       // Var: 0-based variable index
    BinOp bop = BinOp::Add;
    UnFn ufn = UnFn::Neg;
    int exponent = 1;  // Pow: constant integer exponent
    ExprPtr a, b;

    static ExprPtr make_const(double c);
    static ExprPtr make_var(int index);
    static ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr make_unary(UnFn fn, ExprPtr child);
    static ExprPtr make_pow(ExprPtr base, int exponent);
};

struct ExprAst {
    ExprPtr root;
    int max_var = 0; // highest 1-based variable index referenced (0 if none)

    bool valid() const { return root != nullptr; }
};

// Recursive-descent parse of the expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' int)?
//   atom   := number | x1..x9 | '(' expr ')' | fn '(' expr ')'
// with fn one of sqrt, exp, log, sin, cos. 'abs' is rejected. '^' takes a
// constant (possibly negative) integer exponent only.
ExprAst parse_expr(const std::string& text);

// Canonical fully-parenthesized rendering; parse(print(ast)) is structurally
// equal to ast.
std::string print_expr(const ExprAst& ast);

bool expr_equal(const ExprAst& a, const ExprAst& b);

template <class S>
S eval_expr_node(const ExprNode& n, std::span<const S> vars) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    switch (n.kind) {
    case ExprNode::Kind::Const:
        return make_like(n.cval, vars[0]);
    case ExprNode::Kind::Var:
        return vars[static_cast<std::size_t>(n.var)];
    case ExprNode::Kind::Binary: {
        S lhs = eval_expr_node(*n.a, vars);
        S rhs = eval_expr_node(*n.b, vars);
        switch (n.bop) {
        case BinOp::Add: return lhs + rhs;
        case BinOp::Sub: return lhs - rhs;
        case BinOp::Mul: return lhs * rhs;
        case BinOp::Div:
            if (std::abs(scalar_value(rhs)) <= 1e-14)
                throw DomainError("division by ~0 in expression evaluation");
            return lhs / rhs;
        }
        break;
    }
    case ExprNode::Kind::Unary: {
        S u = eval_expr_node(*n.a, vars);
        switch (n.ufn) {
        case UnFn::Neg: return -u;
        case UnFn::Sqrt:
            if (scalar_value(u) < 0.0)
                throw DomainError("sqrt of negative value in expression evaluation");
            return sqrt(u);
        case UnFn::Exp: return exp(u);
        case UnFn::Log:
            if (scalar_value(u) <= 0.0)
                throw DomainError("log of nonpositive value in expression evaluation");
            return log(u);
        case UnFn::Sin: return sin(u);
        case UnFn::Cos: return cos(u);
        }
        break;
    }
    case ExprNode::Kind::Pow: {
        S base = eval_expr_node(*n.a, vars);
        if (n.exponent < 0 && std::abs(scalar_value(base)) <= 1e-14)
            throw DomainError("negative power of ~0 in expression evaluation");
        return powi(base, n.exponent);
    }
    }
    throw DomainError("corrupt expression node");
}

template <class S>
S eval_expr(const ExprAst& ast, std::span<const S> vars) {
    if (!ast.valid())
        throw DomainError("evaluating empty expression");
    if (ast.max_var > static_cast<int>(vars.size()))
        throw SpecError("expression references variable x" + std::to_string(ast.max_var) +
                        " but only " + std::to_string(vars.size()) + " values supplied");
    return eval_expr_node(*ast.root, vars);
}

// Value + gradient + Hessian of the expression at a point, via one pass of
// second-order jet arithmetic.
Jet2 eval_jet2(const ExprAst& ast, const Eigen::VectorXd& y);

double eval_value(const ExprAst& ast, const Eigen::VectorXd& y);

} // namespace wulffkit
