#include "wulffkit/wulff.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include "wulffkit/sampling.hpp"

namespace wulffkit {

Eigen::VectorXd wulff_point(const SphereFunction& F, const Eigen::VectorXd& x) {
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw SpecError("wulff_point: x must be a unit vector");
    return F.extension_jet(x).g;
}

Eigen::VectorXd wulff_point_two_term(const SphereFunction& F, const Eigen::VectorXd& x) {
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw SpecError("wulff_point_two_term: x must be a unit vector");

    if (F.spec().kind == FSpec::Kind::Expr) {
        // Ambient gradient of the raw expression, projected to x^perp.
        Jet2 raw = eval_jet2(F.spec().expr, x);
        Eigen::VectorXd grad_sphere = raw.g - raw.g.dot(x) * x;
        return raw.v * x + grad_sphere;
    }
    // Closed-form families are natively 1-homogeneous; split the extension
    // gradient into its Euler components.
    Jet2 jet = F.extension_jet(x);
    Eigen::VectorXd grad_sphere = jet.g - jet.g.dot(x) * x;
    return jet.v * x + grad_sphere;
}

Mesh wulff_mesh(const SphereFunction& F, int res_theta, int res_phi) {
    if (F.n() != 2)
        throw SpecError("wulff_mesh requires a 2-dimensional Wulff shape (ambient 3)");
    if (res_theta < 8 || res_phi < 16)
        throw SpecError("wulff_mesh: resolution must be at least 8x16");

    Mesh mesh;
    auto phi_at = [&](double th, double ph) {
        Eigen::Vector3d x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                          std::cos(th));
        Eigen::VectorXd p = wulff_point(F, x);
        return Eigen::Vector3d(p(0), p(1), p(2));
    };

    const int rings = res_theta - 1;
    mesh.vertices.push_back(phi_at(0.0, 0.0)); // north pole (index 0)
    for (int i = 1; i <= rings; ++i) {
        double th = std::numbers::pi * i / res_theta;
        for (int j = 0; j < res_phi; ++j) {
            double ph = 2.0 * std::numbers::pi * j / res_phi;
            mesh.vertices.push_back(phi_at(th, ph));
        }
    }
    mesh.vertices.push_back(phi_at(std::numbers::pi, 0.0)); // south pole
    const int south = static_cast<int>(mesh.vertices.size()) - 1;

    auto ring_vertex = [&](int ring, int j) { return 1 + ring * res_phi + (j % res_phi); };

    // Sag of the hinge along diagonal p-q with far vertices r, s: positive
    // when the split produces a reflex (valley) edge seen from outside.
    auto hinge_sag = [&](int p, int q, int r, int s) {
        const Eigen::Vector3d& vp = mesh.vertices[static_cast<std::size_t>(p)];
        const Eigen::Vector3d& vq = mesh.vertices[static_cast<std::size_t>(q)];
        const Eigen::Vector3d& vr = mesh.vertices[static_cast<std::size_t>(r)];
        const Eigen::Vector3d& vs = mesh.vertices[static_cast<std::size_t>(s)];
        Eigen::Vector3d nrm = (vq - vp).cross(vr - vp);
        double nn = nrm.norm();
        if (nn <= 1e-300) return std::numeric_limits<double>::infinity();
        nrm /= nn;
        if (nrm.dot(vp) < 0.0) nrm = -nrm; // outward for a star-shaped body
        return nrm.dot(vs - vp);
    };

    for (int j = 0; j < res_phi; ++j)
        mesh.triangles.push_back({0, ring_vertex(0, j), ring_vertex(0, j + 1)});
    for (int i = 0; i + 1 < rings; ++i) {
        for (int j = 0; j < res_phi; ++j) {
            int a = ring_vertex(i, j), b = ring_vertex(i, j + 1);
            int c = ring_vertex(i + 1, j), d = ring_vertex(i + 1, j + 1);
            // Split each quad along the ridge diagonal; the other diagonal
            // would cut inside the convex body and leave a reflex hinge.
            if (hinge_sag(a, d, c, b) <= hinge_sag(b, c, a, d)) {
                mesh.triangles.push_back({a, c, d});
                mesh.triangles.push_back({a, d, b});
            } else {
                mesh.triangles.push_back({a, c, b});
                mesh.triangles.push_back({b, c, d});
            }
        }
    }
    for (int j = 0; j < res_phi; ++j)
        mesh.triangles.push_back({south, ring_vertex(rings - 1, j + 1), ring_vertex(rings - 1, j)});

    // Orient every triangle outward (relative to the vertex centroid) and
    // reject degenerate faces.
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& v : mesh.vertices) center += v;
    center /= double(mesh.vertices.size());

    for (auto& t : mesh.triangles) {
        const Eigen::Vector3d& v0 = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Eigen::Vector3d& v1 = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Eigen::Vector3d& v2 = mesh.vertices[static_cast<std::size_t>(t[2])];
        Eigen::Vector3d nrm = (v1 - v0).cross(v2 - v0);
        double area = 0.5 * nrm.norm();
        if (area <= 1e-14)
            throw NumericalError("wulff_mesh produced a degenerate triangle");
        if (nrm.dot(v0 - center) < 0.0) std::swap(t[1], t[2]);
    }
    return mesh;
}

double mesh_convexity_defect(const Mesh& mesh) {
    // For each directed edge remember the opposite vertex of its triangle;
    // the adjacent triangle shares the reversed edge.
    std::map<std::pair<int, int>, int> opposite;
    for (const auto& t : mesh.triangles) {
        opposite[{t[0], t[1]}] = t[2];
        opposite[{t[1], t[2]}] = t[0];
        opposite[{t[2], t[0]}] = t[1];
    }

    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d& v0 = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Eigen::Vector3d& v1 = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Eigen::Vector3d& v2 = mesh.vertices[static_cast<std::size_t>(t[2])];
        Eigen::Vector3d nrm = (v1 - v0).cross(v2 - v0).normalized();
        const int edges[3][2] = {{t[0], t[1]}, {t[1], t[2]}, {t[2], t[0]}};
        for (const auto& e : edges) {
            auto it = opposite.find({e[1], e[0]});
            if (it == opposite.end())
                throw NumericalError("mesh is not watertight");
            // Convexity: the far vertex lies on or below this face plane.
            double h = nrm.dot(mesh.vertices[static_cast<std::size_t>(it->second)] - v0);
            worst = std::max(worst, h);
        }
    }
    return worst;
}

void write_obj(const Mesh& mesh, std::ostream& os) {
    os.precision(10);
    for (const auto& v : mesh.vertices)
        os << "v " << v(0) << " " << v(1) << " " << v(2) << "\n";
    for (const auto& t : mesh.triangles)
        os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

void write_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw SpecError("cannot open '" + path + "' for writing");
    write_obj(mesh, os);
}

void write_wulff_csv(const SphereFunction& F, int samples, std::ostream& os) {
    os.precision(17);
    const int m = F.ambient();
    for (int i = 0; i < m; ++i) os << "x" << i + 1 << ",";
    for (int i = 0; i < m; ++i) os << "phi" << i + 1 << (i + 1 < m ? "," : "\n");
    for (const auto& x : sphere_lattice(F.n(), samples)) {
        Eigen::VectorXd p = wulff_point(F, x);
        for (int i = 0; i < m; ++i) os << x(i) << ",";
        for (int i = 0; i < m; ++i) os << p(i) << (i + 1 < m ? "," : "\n");
    }
}

WulffSelfTest wulff_selftest(const SphereFunction& F, const std::vector<int>& res,
                             int threads) {
    Surface surface = make_wulff_surface(F);
    QuadratureGrid grid = build_grid(surface, res);
    auto nodes = evaluate_nodes(surface, F, grid, threads);

    WulffSelfTest st;
    st.nodes = nodes.size();
    for (const auto& nd : nodes)
        for (int i = 0; i < nd.curv.n(); ++i)
            st.sup_lambda_dev = std::max(st.sup_lambda_dev, std::abs(nd.curv.lambda(i) - 1.0));
    return st;
}

} // namespace wulffkit
