#pragma once

#include <functional>
#include <string>

#include "wulffkit/curvature.hpp"
#include "wulffkit/geometry.hpp"

namespace wulffkit {

// Tensor-product quadrature over the parameter domain: Gauss-Legendre on
// non-periodic axes (interior nodes, so poles are never touched), uniform
// trapezoid on periodic axes. Weights carry the parameter measure; the area
// element joins at integration time.
struct QuadratureGrid {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
    std::vector<int> res;
};

QuadratureGrid build_grid(const Surface& surface, const std::vector<int>& res);

// Per-node bundle: frame data, curvature packet for A_F at the inner normal,
// and F(nu).
struct NodeData {
    PointFrame frame;
    CurvaturePacket curv;
    double F = 0.0;
};

// Evaluate all nodes (parallel over a fixed partition, results stored by
// node index so reductions are deterministic). threads <= 0 picks the
// hardware count. Cholesky failure is reported with the offending node.
std::vector<NodeData> evaluate_nodes(const Surface& surface, const SphereFunction& F,
                                     const QuadratureGrid& grid, int threads = 0);

// Deterministic compensated quadrature of a per-node integrand (the area
// element is applied internally).
double integrate(const QuadratureGrid& grid, const std::vector<NodeData>& nodes,
                 const std::function<double(const NodeData&)>& integrand);

struct ResidualEntry {
    int r = 0;
    double raw = 0.0;
    double normalized = 0.0;
};

// Raw and normalized Minkowski residuals rho_r = integral of
// (F M_r + M_{r+1} <X, nu>) dA for r = 0..n-1; normalization by the positive
// integral of F dA.
std::vector<ResidualEntry> minkowski_residuals(const QuadratureGrid& grid,
                                               const std::vector<NodeData>& nodes);

struct RatioStat {
    int r = 0, k = 0;
    double min = 0.0, max = 0.0;
    long long undefined = 0; // nodes where |M_k| <= 1e-12
};

struct Diagnostics {
    double support_min = 0.0, support_max = 0.0;
    bool fixed_sign_support = false;
    double min_eig_B = 0.0;
    bool convex = false;
    std::vector<double> M_inf, M_sup;  // per r = 0..n
    std::vector<bool> M_constant;      // sup-inf <= 1e-6 * max(1, sup|M_r|)
    double m1m2_identity_residual = 0.0;
    double m1m2_negativity = 0.0;
    std::vector<double> maclaurin_margin; // r = 2..n: min of M_{r-1} - M_r^{(r-1)/r}
    std::vector<long long> maclaurin_defined;
    std::vector<double> newton_margin;    // k = 0..n-2: min of M_{k+1}^2 - M_k M_{k+2}
    std::vector<RatioStat> ratios;        // all pairs k < r
    double lambda_spread_max = 0.0;
    bool wulff_candidate = false;
};

Diagnostics diagnostics(const std::vector<NodeData>& nodes, int n);

struct ConvergenceLevel {
    std::vector<int> res;
    std::vector<double> normalized; // per r
};

// Observed order between consecutive refinement levels, per r; NaN when
// either level sits at the roundoff floor (nothing left to converge).
std::vector<std::vector<double>> convergence_slopes(const std::vector<ConvergenceLevel>& levels);

struct VerificationReport {
    std::string surface_text, f_text;
    std::vector<int> grid_res;
    std::vector<ResidualEntry> residuals;
    Diagnostics diag;
    std::vector<ConvergenceLevel> convergence;
    ConvexityReport audit;
    bool audit_passed = false;
    bool forced = false;
};

struct VerifyOptions {
    std::vector<int> res;      // base resolution per axis
    int converge = 0;          // additional doublings
    int threads = 0;
    bool force = false;        // run even if the convexity audit fails
    int audit_samples = 2000;
    double audit_tol = 1e-8;
};

// Full verification run: convexity audit, residuals + diagnostics at every
// refinement level (base, base*2, ..., base*2^converge); the residual and
// diagnostic sections refer to the finest grid.
VerificationReport run_verification(const SurfaceSpec& surface_spec, const FSpec& f_spec,
                                    const VerifyOptions& opts);

std::string report_to_json(const VerificationReport& report);
std::string report_to_csv(const VerificationReport& report);

} // namespace wulffkit
