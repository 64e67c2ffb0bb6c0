#pragma once

#include <array>
#include <iosfwd>

#include "wulffkit/integrals.hpp"

namespace wulffkit {

// The Wulff map phi(x) = F(x) x + grad_{S^n} F(x), computed as grad F~(x)
// (one jet evaluation; the two forms agree by Euler's relation).
Eigen::VectorXd wulff_point(const SphereFunction& F, const Eigen::VectorXd& x);

// Cross-check path: F(x) x + projection of the ambient gradient of the raw
// (not homogenized) extension. Distinct arithmetic from wulff_point for
// expression-defined F.
Eigen::VectorXd wulff_point_two_term(const SphereFunction& F, const Eigen::VectorXd& x);

struct Mesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
};

// Latitude-longitude sampling of W_F with pole fans (n = 2 only). Triangles
// are oriented outward; the grid closes watertight.
Mesh wulff_mesh(const SphereFunction& F, int res_theta, int res_phi);

// Worst dihedral opening over all interior edges: <= 0 (up to roundoff) for
// a convex mesh. Positive values measure the largest concavity.
double mesh_convexity_defect(const Mesh& mesh);

// OBJ: `v x y z` lines then 1-based `f i j k`, ASCII, >= 9 significant digits.
void write_obj(const Mesh& mesh, std::ostream& os);
void write_obj(const Mesh& mesh, const std::string& path);

// CSV sampling of the Wulff map for n != 2: one row per sample, x then phi(x).
void write_wulff_csv(const SphereFunction& F, int samples, std::ostream& os);

struct WulffSelfTest {
    double sup_lambda_dev = 0.0; // sup over nodes, i of |lambda_i - 1|
    std::size_t nodes = 0;
};

// Push W_F through the full geometry/curvature pipeline; its anisotropic
// principal curvatures must all equal 1 under the inner-normal convention.
WulffSelfTest wulff_selftest(const SphereFunction& F, const std::vector<int>& res,
                             int threads = 0);

} // namespace wulffkit
