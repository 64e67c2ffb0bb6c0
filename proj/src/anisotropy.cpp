#include "wulffkit/anisotropy.hpp"

#include "wulffkit/sampling.hpp"

namespace wulffkit {

SphereFunction::SphereFunction(FSpec spec) : spec_(std::move(spec)) {}

double SphereFunction::value(const Eigen::VectorXd& x) const {
    std::vector<double> y(x.data(), x.data() + x.size());
    return extension<double>(y);
}

Jet2 SphereFunction::extension_jet(const Eigen::VectorXd& y) const {
    if (y.size() != ambient())
        throw SpecError("extension_jet: point dimension mismatch");
    if (y.norm() <= 1e-12)
        throw DomainError("extension_jet: zero-length input");
    const int m = ambient();
    std::vector<Jet2> vars;
    vars.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) vars.push_back(Jet2::variable(y(i), i, m));
    return extension<Jet2>(vars);
}

Eigen::MatrixXd anisotropy_matrix(const SphereFunction& F, const Eigen::VectorXd& x,
                                  const Eigen::MatrixXd& basis) {
    const int n = F.n();
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw SpecError("anisotropy_matrix: x must be a unit vector");
    if (basis.rows() != n + 1 || basis.cols() != n)
        throw SpecError("anisotropy_matrix: basis must be (n+1) x n");
    for (int i = 0; i < n; ++i) {
        if (std::abs(basis.col(i).dot(x)) > 1e-10)
            throw SpecError("anisotropy_matrix: basis not orthogonal to x");
        for (int j = i; j < n; ++j) {
            double d = basis.col(i).dot(basis.col(j)) - (i == j ? 1.0 : 0.0);
            if (std::abs(d) > 1e-10)
                throw SpecError("anisotropy_matrix: basis not orthonormal");
        }
    }

    Jet2 jet = F.extension_jet(x);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd hb = jet.h * basis.col(i);
        for (int j = i; j < n; ++j) {
            A(i, j) = basis.col(j).dot(hb);
            A(j, i) = A(i, j);
        }
    }
    return A;
}

ConvexityReport convexity_audit(const SphereFunction& F, int samples, double tol) {
    if (samples < 100)
        throw SpecError("convexity_audit needs at least 100 samples");

    ConvexityReport rep;
    rep.samples = samples;
    rep.tol = tol;
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();

    for (const auto& x : sphere_lattice(F.n(), samples)) {
        Eigen::MatrixXd basis = tangent_basis(x);
        Eigen::MatrixXd A = anisotropy_matrix(F, x, basis);
        double mineig = jacobi_eigenvalues(A)(0);
        if (mineig < rep.min_eigenvalue) {
            rep.min_eigenvalue = mineig;
            rep.argmin = x;
        }
    }
    rep.pass = rep.min_eigenvalue > tol;
    return rep;
}

} // namespace wulffkit
