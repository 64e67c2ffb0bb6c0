#pragma once

#include <span>
#include <vector>

#include "wulffkit/linalg.hpp"
#include "wulffkit/specs.hpp"

namespace wulffkit {

// Anisotropy function F on S^n, evaluated through its degree-1 homogeneous
// extension F~(y) = |y| F(y/|y|). The ambient Hessian of F~ at x in S^n
// kills x (Euler relation) and restricts on x^perp to A_F = D^2 F + F*1,
// which is what the whole pipeline consumes.
class SphereFunction {
public:
    explicit SphereFunction(FSpec spec);

    const FSpec& spec() const { return spec_; }
    int ambient() const { return spec_.ambient; }
    int n() const { return spec_.ambient - 1; }

    // F at a unit vector (plain value).
    double value(const Eigen::VectorXd& x) const;

    // Generic evaluation of F~ over jets/duals; y must have ambient() entries.
    template <class S>
    S extension(std::span<const S> y) const {
        using std::sqrt;
        const int m = ambient();
        switch (spec_.kind) {
        case FSpec::Kind::Const: {
            S q = y[0] * y[0];
            for (int i = 1; i < m; ++i) q = q + y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            return sqrt(q) * spec_.c;
        }
        case FSpec::Kind::Ellipsoid: {
            S q = (y[0] * spec_.axes[0]) * (y[0] * spec_.axes[0]);
            for (int i = 1; i < m; ++i) {
                S t = y[static_cast<std::size_t>(i)] * spec_.axes[static_cast<std::size_t>(i)];
                q = q + t * t;
            }
            return sqrt(q);
        }
        case FSpec::Kind::PNorm: {
            S q = y[0] * y[0];
            for (int i = 1; i < m; ++i) q = q + y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            const double e2 = spec_.eps * spec_.eps;
            S sum = powr(y[0] * y[0] + q * e2, spec_.p / 2.0);
            for (int i = 1; i < m; ++i) {
                auto yi = y[static_cast<std::size_t>(i)];
                sum = sum + powr(yi * yi + q * e2, spec_.p / 2.0);
            }
            return powr(sum, 1.0 / spec_.p);
        }
        case FSpec::Kind::Expr: {
            S q = y[0] * y[0];
            for (int i = 1; i < m; ++i) q = q + y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            S nrm = sqrt(q);
            std::vector<S> unit;
            unit.reserve(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) unit.push_back(y[static_cast<std::size_t>(i)] / nrm);
            return eval_expr<S>(spec_.expr, unit) * nrm;
        }
        }
        throw SpecError("corrupt FSpec");
    }

    // Value / gradient / Hessian of F~ at y (|y| > 1e-12). The gradient is
    // the Wulff map; the Hessian restricted to x^perp is A_F.
    Jet2 extension_jet(const Eigen::VectorXd& y) const;

private:
    FSpec spec_;
};

// A_F in a given orthonormal basis of x^perp: A_ij = b_i . Hess F~(x) . b_j.
// basis is (n+1) x n, columns orthonormal and orthogonal to the unit x.
Eigen::MatrixXd anisotropy_matrix(const SphereFunction& F, const Eigen::VectorXd& x,
                                  const Eigen::MatrixXd& basis);

struct ConvexityReport {
    int samples = 0;
    double min_eigenvalue = 0.0;
    Eigen::VectorXd argmin;
    bool pass = false;
    double tol = 1e-8;
};

// Scan a deterministic lattice of S^n for the minimum eigenvalue of A_F.
// pass <=> min eigenvalue > tol.
ConvexityReport convexity_audit(const SphereFunction& F, int samples = 2000,
                                double tol = 1e-8);

} // namespace wulffkit
