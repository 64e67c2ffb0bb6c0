#pragma once

#include <string>
#include <vector>

#include "wulffkit/expr.hpp"

namespace wulffkit {

// Parsed description of an anisotropy function F on S^n (ambient = n+1).
struct FSpec {
    enum class Kind { Const, Ellipsoid, PNorm, Expr };

    Kind kind = Kind::Const;
    int ambient = 3;
    double c = 1.0;            // Const
    std::vector<double> axes;  // Ellipsoid: a_1..a_{n+1}, all > 0
    double p = 2.0;            // PNorm exponent, > 1
    double eps = 0.0;          // PNorm smoothing, >= 0
    ExprAst expr;              // Expr
    std::string text;          // original spec text
};

// Parsed description of an immersed closed hypersurface in R^{n+1}.
struct SurfaceSpec {
    enum class Kind { Sphere, Ellipsoid, RadialGraph, Torus, ClosedCurve, Wulff };

    Kind kind = Kind::Sphere;
    int n = 2;                 // surface dimension
    double R = 1.0;            // Sphere radius / Torus major radius
    double r = 0.25;           // Torus minor radius
    std::vector<double> axes;  // Ellipsoid semi-axes, n+1 of them
    ExprAst rho;               // RadialGraph radius expression over S^n
    ExprAst cx, cy;            // ClosedCurve components, parameter x1 in [0,2pi)
    FSpec wulff_f;             // Wulff: surface is the Wulff shape of this F
    std::string text;

    int ambient() const { return n + 1; }
};

// Grammar: const:<c> | ellipsoid:<a1>,...,<a_{n+1}> | pnorm:<p>,<eps> |
// expr:<expression>. Parameters are validated against the type invariants;
// Expr positivity on S^n is probed at load.
FSpec parse_fspec(const std::string& text, int ambient_dim);

// Grammar: sphere:<R> | ellipsoidsurf:<a...> | radial:<expression> |
// torus:<R>,<r> | curve:<xexpr>;<yexpr> | wulff:<fspec>. Sphere, radial and
// wulff default to n=2; pass ambient_dim to override (radial also infers the
// ambient dimension from the highest variable the expression references).
SurfaceSpec parse_surfspec(const std::string& text);
SurfaceSpec parse_surfspec(const std::string& text, int ambient_dim);

} // namespace wulffkit
