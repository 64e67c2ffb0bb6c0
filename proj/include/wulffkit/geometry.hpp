#pragma once

#include <memory>
#include <optional>

#include "wulffkit/anisotropy.hpp"

namespace wulffkit {

struct DomainAxis {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
};

// A closed parametric hypersurface ready for pointwise geometry queries.
// The chart returns second-order jets of the position components w.r.t. the
// parameters, which is everything the frame/fundamental-form assembly needs.
class Surface {
public:
    Surface(SurfaceSpec spec, std::shared_ptr<const SphereFunction> wulff_f);

    const SurfaceSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    int ambient() const { return spec_.n + 1; }
    const std::vector<DomainAxis>& domain() const { return domain_; }
    bool star_shaped() const;

    // Position components as jets in the n parameters. Throws NumericalError
    // near coordinate poles (|sin theta| < 1e-9).
    std::vector<Jet2> chart_jet(const Eigen::VectorXd& u) const;

    // Plain position (no derivatives).
    Eigen::VectorXd position(const Eigen::VectorXd& u) const;

    int curve_orientation() const { return curve_orient_; }

private:
    friend Surface make_surface(const SurfaceSpec&);
    SurfaceSpec spec_;
    std::shared_ptr<const SphereFunction> wulff_f_;
    std::vector<DomainAxis> domain_;
    int curve_orient_ = 1;
};

// Build a surface and probe the immersion condition (Gram determinant of the
// coordinate tangents > 1e-12) at a coarse set of interior nodes.
Surface make_surface(const SurfaceSpec& spec);
Surface make_wulff_surface(const SphereFunction& F);

// Everything the curvature pipeline needs at one sample: position, inner
// unit normal, orthonormal tangent frame, second fundamental form B in that
// frame (sphere of radius R gives B = I/R, support = -R), area element and
// support <X, nu>.
struct PointFrame {
    Eigen::VectorXd u;
    Eigen::VectorXd X;
    Eigen::VectorXd nu;
    Eigen::MatrixXd frame; // (n+1) x n, columns e_1..e_n
    Eigen::MatrixXd B;     // n x n, symmetric
    double area_element = 0.0;
    double support = 0.0;
};

// param_mix (optional, n x n orthogonal) premixes the coordinate tangent
// directions before Gram-Schmidt; geometric invariants must not change.
PointFrame point_frame(const Surface& surface, const Eigen::VectorXd& u,
                       const Eigen::MatrixXd* param_mix = nullptr);

} // namespace wulffkit
