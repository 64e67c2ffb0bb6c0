#include "wulffkit/curvature.hpp"

namespace wulffkit {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> f_weingarten(const Eigen::MatrixXd& A,
                                                         const Eigen::MatrixXd& B) {
    const int n = static_cast<int>(A.rows());
    if (B.rows() != n || B.cols() != n || A.cols() != n)
        throw SpecError("f_weingarten: size mismatch");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()))
        throw SpecError("f_weingarten: A not symmetric");
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, B.cwiseAbs().maxCoeff()))
        throw SpecError("f_weingarten: B not symmetric");

    // A = C^T C; AB is similar to the symmetric C B C^T, so the spectrum is
    // real and comes out of the symmetric solver only.
    Eigen::MatrixXd C = cholesky_ct(A);
    Eigen::MatrixXd sym = C * B * C.transpose();
    sym = 0.5 * (sym + sym.transpose());
    Eigen::VectorXd lambda = jacobi_eigenvalues(sym);
    return {A * B, lambda};
}

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda) {
    const int n = static_cast<int>(lambda.size());
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
    e(0) = 1.0;
    for (int k = 0; k < n; ++k)
        for (int r = k + 1; r >= 1; --r) e(r) += lambda(k) * e(r - 1);
    return e;
}

Eigen::VectorXd elementary_symmetric_from_matrix(const Eigen::MatrixXd& S) {
    const int n = static_cast<int>(S.rows());
    if (S.cols() != n)
        throw SpecError("elementary_symmetric_from_matrix: matrix must be square");
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n + 1);
    sigma(0) = 1.0;
    // B iterates through the Newton operators: C = S B_{k-1}, sigma_k =
    // tr(C)/k, B_k = sigma_k I - C.
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        Eigen::MatrixXd C = S * B;
        sigma(k) = C.trace() / k;
        B = sigma(k) * Eigen::MatrixXd::Identity(n, n) - C;
    }
    return sigma;
}

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double v = 1.0;
    for (int k = 1; k <= r; ++k) v = v * (n - r + k) / k;
    return v;
}

std::vector<Eigen::MatrixXd> newton_operators(const Eigen::VectorXd& sigma,
                                              const Eigen::MatrixXd& S) {
    const int n = static_cast<int>(S.rows());
    if (sigma.size() != n + 1)
        throw SpecError("newton_operators: sigma must have n+1 entries");
    std::vector<Eigen::MatrixXd> P;
    P.reserve(static_cast<std::size_t>(n));
    P.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int r = 1; r < n; ++r)
        P.push_back(sigma(r) * Eigen::MatrixXd::Identity(n, n) - P.back() * S);
    return P;
}

CurvaturePacket curvature_packet(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    CurvaturePacket pkt;
    pkt.A = A;
    pkt.B = B;
    auto [S, lambda] = f_weingarten(A, B);
    pkt.S = std::move(S);
    pkt.lambda = std::move(lambda);
    pkt.sigma = elementary_symmetric(pkt.lambda);
    const int n = static_cast<int>(pkt.lambda.size());
    pkt.M.resize(n + 1);
    for (int r = 0; r <= n; ++r) pkt.M(r) = pkt.sigma(r) / binomial(n, r);
    pkt.P = newton_operators(pkt.sigma, pkt.S);
    return pkt;
}

int generalized_kronecker(std::span<const int> sub, std::span<const int> super) {
    const int q = static_cast<int>(sub.size());
    if (static_cast<int>(super.size()) != q)
        throw SpecError("generalized_kronecker: tuple length mismatch");

    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j)
            if (sub[static_cast<std::size_t>(i)] == sub[static_cast<std::size_t>(j)]) return 0;

    int perm[8];
    bool used[8] = {};
    if (q > 8)
        throw SpecError("generalized_kronecker: tuple too long");
    for (int b = 0; b < q; ++b) {
        int found = -1;
        for (int a = 0; a < q; ++a) {
            if (!used[a] && sub[static_cast<std::size_t>(a)] == super[static_cast<std::size_t>(b)]) {
                found = a;
                used[a] = true;
                break;
            }
        }
        if (found < 0) return 0;
        perm[b] = found;
    }

    int inversions = 0;
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j)
            if (perm[i] > perm[j]) ++inversions;
    return (inversions & 1) ? -1 : 1;
}

} // namespace wulffkit
