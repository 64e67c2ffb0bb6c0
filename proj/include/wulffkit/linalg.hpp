#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulffkit/errors.hpp"

namespace wulffkit {

// Cholesky factor C of a symmetric positive definite A with A = C^T C
// (C upper triangular). Throws CholeskyError when A is not SPD, which the
// curvature pipeline interprets as a convexity violation.
Eigen::MatrixXd cholesky_ct(const Eigen::MatrixXd& A);

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, sorted
// ascending. Intended for the small (n <= 8) matrices of this pipeline.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd S);

// Gauss-Legendre nodes and weights on [-1, 1], then affinely mapped.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npts);
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npts, double a, double b);

// Orthonormalize the columns of T by modified Gram-Schmidt. Returns Q with
// Q^T Q = I and the upper-triangular R with T = Q R. Throws NumericalError
// on (numerically) dependent columns.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_schmidt(const Eigen::MatrixXd& T);

// Unit vector orthogonal to all columns of the orthonormal Q (which must
// span a corank-1 subspace). Deterministic: seeds from the coordinate axis
// least represented in Q.
Eigen::VectorXd orthogonal_complement(const Eigen::MatrixXd& Q);

// Orthonormal basis of x^perp for a unit vector x, as the columns of an
// (n+1) x n matrix.
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x);

// Compensated (Neumaier) accumulator for deterministic, order-fixed sums.
class CompensatedSum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace wulffkit
