#pragma once

#include <span>
#include <vector>

#include "wulffkit/linalg.hpp"

namespace wulffkit {

// All anisotropic curvature quantities at one point: S = A*B, its (real)
// eigenvalues lambda_1 <= ... <= lambda_n, the elementary symmetric
// functions sigma_0..sigma_n, the normalized means M_r = sigma_r / C(n,r),
// and the Newton operators P_0..P_{n-1}.
struct CurvaturePacket {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd S;
    Eigen::VectorXd lambda;
    Eigen::VectorXd sigma; // size n+1
    Eigen::VectorXd M;     // size n+1
    std::vector<Eigen::MatrixXd> P;

    int n() const { return static_cast<int>(lambda.size()); }
};

// S = A*B with A symmetric positive definite and B symmetric. The spectrum
// is real: with A = C^T C (Cholesky), A*B is similar to the symmetric
// C B C^T, whose eigenvalues are extracted by the symmetric solver. Throws
// CholeskyError when A is not SPD (convexity violation at the point).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> f_weingarten(const Eigen::MatrixXd& A,
                                                         const Eigen::MatrixXd& B);

// sigma_0..sigma_n from the eigenvalues, by the stable product recurrence
// expanding prod_i (t + lambda_i).
Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda);

// The same coefficients straight from the matrix (no eigenvalues), by the
// Faddeev-LeVerrier trace recursion. Works for any square S.
Eigen::VectorXd elementary_symmetric_from_matrix(const Eigen::MatrixXd& S);

double binomial(int n, int r);

// P_0 = I, P_r = sigma_r I - P_{r-1} S; returns P_0..P_{n-1}.
std::vector<Eigen::MatrixXd> newton_operators(const Eigen::VectorXd& sigma,
                                              const Eigen::MatrixXd& S);

CurvaturePacket curvature_packet(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Generalized Kronecker symbol: +1/-1 when the subscript tuple is distinct
// and the superscript tuple is an even/odd permutation of it, else 0.
int generalized_kronecker(std::span<const int> sub, std::span<const int> super);

// Brute-force combinatorial oracles (n <= 5); exact in integer arithmetic
// when T is an integer type.
//
//   sigma_r = (1/r!) sum delta^{j_1..j_r}_{i_1..i_r} s_{i_1 j_1} ... s_{i_r j_r}
template <class T>
T kronecker_sigma(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& S, int r) {
    const int n = static_cast<int>(S.rows());
    if (n > 5)
        throw SpecError("kronecker_sigma is an oracle for n <= 5");
    if (r < 0 || r > n)
        throw SpecError("kronecker_sigma: r out of range");
    if (r == 0) return T(1);

    std::vector<int> I(static_cast<std::size_t>(r), 0), J(static_cast<std::size_t>(r), 0);
    T total = T(0);
    long long rfact = 1;
    for (int k = 2; k <= r; ++k) rfact *= k;

    const auto advance = [n](std::vector<int>& idx) {
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (++idx[a] < n) return true;
            idx[a] = 0;
        }
        return false;
    };

    do {
        do {
            int delta = generalized_kronecker(I, J);
            if (delta == 0) continue;
            T prod = T(delta);
            for (int a = 0; a < r; ++a)
                prod = prod * S(I[static_cast<std::size_t>(a)], J[static_cast<std::size_t>(a)]);
            total = total + prod;
        } while (advance(J));
    } while (advance(I));

    return total / T(rfact);
}

//   (P_r)_{ij} = (1/r!) sum delta^{j_1..j_r i}_{i_1..i_r j} s_{i_1 j_1} ... s_{i_r j_r}
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>
kronecker_newton(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& S, int r) {
    const int n = static_cast<int>(S.rows());
    if (n > 5)
        throw SpecError("kronecker_newton is an oracle for n <= 5");
    if (r < 0 || r >= n)
        throw SpecError("kronecker_newton: r out of range");

    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> P(n, n);
    long long rfact = 1;
    for (int k = 2; k <= r; ++k) rfact *= k;

    std::vector<int> sub(static_cast<std::size_t>(r) + 1, 0);
    std::vector<int> super(static_cast<std::size_t>(r) + 1, 0);

    const auto advance = [n](std::vector<int>& idx, std::size_t count) {
        for (std::size_t a = 0; a < count; ++a) {
            if (++idx[a] < n) return true;
            idx[a] = 0;
        }
        return false;
    };

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            sub[static_cast<std::size_t>(r)] = j;
            super[static_cast<std::size_t>(r)] = i;
            std::fill(sub.begin(), sub.begin() + r, 0);
            T total = T(0);
            do {
                std::fill(super.begin(), super.begin() + r, 0);
                do {
                    int delta = generalized_kronecker(sub, super);
                    if (delta == 0) continue;
                    T prod = T(delta);
                    for (int a = 0; a < r; ++a)
                        prod = prod * S(sub[static_cast<std::size_t>(a)],
                                        super[static_cast<std::size_t>(a)]);
                    total = total + prod;
                } while (advance(super, static_cast<std::size_t>(r)));
            } while (advance(sub, static_cast<std::size_t>(r)));
            P(i, j) = total / T(rfact);
        }
    }
    return P;
}

} // namespace wulffkit
