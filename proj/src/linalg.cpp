#include "wulffkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wulffkit {

Eigen::MatrixXd cholesky_ct(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n)
        throw SpecError("cholesky_ct needs a square matrix");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= C(k, j) * C(k, j);
        if (!(d > 0.0))
            throw CholeskyError("matrix not positive definite (pivot " +
                                std::to_string(j) + " = " + std::to_string(d) + ")");
        C(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = A(j, i);
            for (int k = 0; k < j; ++k) s -= C(k, j) * C(k, i);
            C(j, i) = s / C(j, j);
        }
    }
    return C;
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd S) {
    const int n = static_cast<int>(S.rows());
    if (S.cols() != n)
        throw SpecError("jacobi_eigenvalues needs a square matrix");
    if (n == 1) {
        Eigen::VectorXd e(1);
        e(0) = S(0, 0);
        return e;
    }

    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    const double tol = 1e-15 * scale;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::abs(S(p, q));
        if (off <= tol) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(S(p, q)) <= tol * 1e-2) continue;
                double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < n; ++k) {
                    double skp = S(k, p), skq = S(k, q);
                    S(k, p) = c * skp - s * skq;
                    S(k, q) = s * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    double spk = S(p, k), sqk = S(q, k);
                    S(p, k) = c * spk - s * sqk;
                    S(q, k) = s * spk + c * sqk;
                }
            }
        }
    }

    Eigen::VectorXd e = S.diagonal();
    std::sort(e.data(), e.data() + n);
    return e;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npts) {
    if (npts < 1)
        throw SpecError("gauss_legendre needs at least one node");
    std::vector<double> x(npts), w(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(npts - 1 - i)] = z;
        double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(npts - 1 - i)] = wi;
    }
    return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npts, double a, double b) {
    auto [x, w] = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < npts; ++i) {
        x[static_cast<std::size_t>(i)] = mid + half * x[static_cast<std::size_t>(i)];
        w[static_cast<std::size_t>(i)] *= half;
    }
    return {x, w};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_schmidt(const Eigen::MatrixXd& T) {
    const int rows = static_cast<int>(T.rows());
    const int cols = static_cast<int>(T.cols());
    Eigen::MatrixXd Q(rows, cols);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(cols, cols);
    for (int j = 0; j < cols; ++j) {
        Eigen::VectorXd v = T.col(j);
        for (int i = 0; i < j; ++i) {
            R(i, j) = Q.col(i).dot(v);
            v -= R(i, j) * Q.col(i);
        }
        R(j, j) = v.norm();
        if (R(j, j) <= 1e-13)
            throw NumericalError("degenerate tangent frame in Gram-Schmidt");
        Q.col(j) = v / R(j, j);
    }
    return {Q, R};
}

Eigen::VectorXd orthogonal_complement(const Eigen::MatrixXd& Q) {
    const int rows = static_cast<int>(Q.rows());
    const int cols = static_cast<int>(Q.cols());
    if (cols != rows - 1)
        throw SpecError("orthogonal_complement expects a corank-1 orthonormal set");

    int seed = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < rows; ++j) {
        double mass = Q.row(j).squaredNorm();
        if (mass < best) {
            best = mass;
            seed = j;
        }
    }
    Eigen::VectorXd v = Eigen::VectorXd::Unit(rows, seed);
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < cols; ++i) v -= Q.col(i).dot(v) * Q.col(i);
    double nrm = v.norm();
    if (nrm <= 1e-12)
        throw NumericalError("failed to complete orthonormal frame");
    return v / nrm;
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) {
    const int m = static_cast<int>(x.size());
    Eigen::MatrixXd cand(m, m);
    cand.col(0) = x;
    int filled = 1;
    // Seed with the coordinate axes least aligned with x, then orthonormalize.
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(x(a)) < std::abs(x(b)); });
    for (int idx : order) {
        if (filled == m) break;
        cand.col(filled++) = Eigen::VectorXd::Unit(m, idx);
    }
    auto [Q, R] = gram_schmidt(cand.leftCols(m));
    return Q.rightCols(m - 1);
}

} // namespace wulffkit
