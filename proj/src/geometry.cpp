#include "wulffkit/geometry.hpp"

#include <cmath>
#include <numbers>

namespace wulffkit {

namespace {

constexpr double kPoleTol = 1e-9;
constexpr double kImmersionTol = 1e-12;

// Hyperspherical embedding of S^n by n angles, polar angles first:
//   x_0 = cos t_1, x_i = sin t_1 ... sin t_i cos t_{i+1}, x_n = sin t_1 ... sin t_n.
template <class S>
std::vector<S> hypersphere_embed(std::span<const S> t) {
    using std::cos;
    using std::sin;
    const int n = static_cast<int>(t.size());
    std::vector<S> x(static_cast<std::size_t>(n) + 1, make_like(0.0, t[0]));
    S prod = make_like(1.0, t[0]);
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = prod * cos(t[static_cast<std::size_t>(i)]);
        prod = prod * sin(t[static_cast<std::size_t>(i)]);
    }
    x[static_cast<std::size_t>(n)] = prod;
    return x;
}

std::vector<Jet2> parameter_jets(const Eigen::VectorXd& u) {
    const int n = static_cast<int>(u.size());
    std::vector<Jet2> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.push_back(Jet2::variable(u(i), i, n));
    return t;
}

void check_poles(const Eigen::VectorXd& u, int npolar) {
    for (int i = 0; i < npolar; ++i)
        if (std::abs(std::sin(u(i))) < kPoleTol)
            throw NumericalError("parameter point too close to a coordinate pole");
}

} // namespace

Surface::Surface(SurfaceSpec spec, std::shared_ptr<const SphereFunction> wulff_f)
    : spec_(std::move(spec)), wulff_f_(std::move(wulff_f)) {
    const int n = spec_.n;
    switch (spec_.kind) {
    case SurfaceSpec::Kind::Sphere:
    case SurfaceSpec::Kind::Ellipsoid:
    case SurfaceSpec::Kind::RadialGraph:
    case SurfaceSpec::Kind::Wulff:
        for (int i = 0; i < n - 1; ++i) domain_.push_back({0.0, std::numbers::pi, false});
        domain_.push_back({0.0, 2.0 * std::numbers::pi, true});
        break;
    case SurfaceSpec::Kind::Torus:
        domain_.push_back({0.0, 2.0 * std::numbers::pi, true});
        domain_.push_back({0.0, 2.0 * std::numbers::pi, true});
        break;
    case SurfaceSpec::Kind::ClosedCurve:
        domain_.push_back({0.0, 2.0 * std::numbers::pi, true});
        break;
    }
}

bool Surface::star_shaped() const {
    switch (spec_.kind) {
    case SurfaceSpec::Kind::Sphere:
    case SurfaceSpec::Kind::Ellipsoid:
    case SurfaceSpec::Kind::RadialGraph:
    case SurfaceSpec::Kind::Wulff:
        return true;
    default:
        return false;
    }
}

std::vector<Jet2> Surface::chart_jet(const Eigen::VectorXd& u) const {
    const int n = spec_.n;
    if (u.size() != n)
        throw SpecError("chart_jet: parameter dimension mismatch");

    switch (spec_.kind) {
    case SurfaceSpec::Kind::Sphere: {
        check_poles(u, n - 1);
        auto t = parameter_jets(u);
        auto x = hypersphere_embed<Jet2>(t);
        for (auto& c : x) c = c * spec_.R;
        return x;
    }
    case SurfaceSpec::Kind::Ellipsoid: {
        check_poles(u, n - 1);
        auto t = parameter_jets(u);
        auto x = hypersphere_embed<Jet2>(t);
        for (int i = 0; i <= n; ++i)
            x[static_cast<std::size_t>(i)] =
                x[static_cast<std::size_t>(i)] * spec_.axes[static_cast<std::size_t>(i)];
        return x;
    }
    case SurfaceSpec::Kind::RadialGraph: {
        check_poles(u, n - 1);
        auto t = parameter_jets(u);
        auto x = hypersphere_embed<Jet2>(t);
        Jet2 rho = eval_expr<Jet2>(spec_.rho, x);
        for (auto& c : x) c = c * rho;
        return x;
    }
    case SurfaceSpec::Kind::Torus: {
        auto t = parameter_jets(u);
        const Jet2& th = t[0];
        const Jet2& ph = t[1];
        Jet2 w = cos(th) * spec_.r + spec_.R;
        return {w * cos(ph), w * sin(ph), sin(th) * spec_.r};
    }
    case SurfaceSpec::Kind::ClosedCurve: {
        auto t = parameter_jets(u);
        return {eval_expr<Jet2>(spec_.cx, t), eval_expr<Jet2>(spec_.cy, t)};
    }
    case SurfaceSpec::Kind::Wulff: {
        check_poles(u, n - 1);
        const int m = n + 1;
        auto t = parameter_jets(u);
        auto x = hypersphere_embed<Jet2>(t);
        const Jet2& exemplar = x[0];
        std::vector<DualN<Jet2>> y;
        y.reserve(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k)
            y.push_back(DualN<Jet2>::variable(x[static_cast<std::size_t>(k)], k, m, exemplar));
        DualN<Jet2> Ft = wulff_f_->extension<DualN<Jet2>>(y);
        // phi = grad F~, with exact parameter jets carried through.
        std::vector<Jet2> phi;
        phi.reserve(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) phi.push_back(Ft.d[static_cast<std::size_t>(k)]);
        return phi;
    }
    }
    throw SpecError("corrupt SurfaceSpec");
}

Eigen::VectorXd Surface::position(const Eigen::VectorXd& u) const {
    auto jets = chart_jet(u);
    Eigen::VectorXd X(ambient());
    for (int i = 0; i < ambient(); ++i) X(i) = jets[static_cast<std::size_t>(i)].v;
    return X;
}

Surface make_surface(const SurfaceSpec& spec) {
    std::shared_ptr<const SphereFunction> wf;
    if (spec.kind == SurfaceSpec::Kind::Wulff)
        wf = std::make_shared<SphereFunction>(spec.wulff_f);
    Surface s(spec, std::move(wf));

    if (spec.kind == SurfaceSpec::Kind::ClosedCurve) {
        Eigen::VectorXd u0(1), u1(1);
        u0 << 0.0;
        u1 << 2.0 * std::numbers::pi;
        Eigen::VectorXd a = s.position(u0), b = s.position(u1);
        if ((a - b).norm() > 1e-8 * (1.0 + a.norm()))
            throw SpecError("curve is not closed over [0, 2pi)");
    }

    // Immersion probe on a coarse interior grid.
    const int n = s.n();
    const int per_axis = 7;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        Eigen::VectorXd u(n);
        for (int a = 0; a < n; ++a) {
            const auto& ax = s.domain()[static_cast<std::size_t>(a)];
            u(a) = ax.lo + (ax.hi - ax.lo) * (idx[static_cast<std::size_t>(a)] + 0.5) / per_axis;
        }
        auto jets = s.chart_jet(u);
        Eigen::MatrixXd T(s.ambient(), n);
        double xsq = 0.0;
        for (int c = 0; c < s.ambient(); ++c) {
            for (int i = 0; i < n; ++i) T(c, i) = jets[static_cast<std::size_t>(c)].g(i);
            xsq += jets[static_cast<std::size_t>(c)].v * jets[static_cast<std::size_t>(c)].v;
        }
        Eigen::MatrixXd G = T.transpose() * T;
        bool ok = G.determinant() > kImmersionTol * G.diagonal().prod();
        for (int i = 0; i < n; ++i)
            if (!(G(i, i) > 1e-24 * (1.0 + xsq))) ok = false;
        if (!ok)
            throw NumericalError("immersion check failed: degenerate metric at probe node");
        int a = 0;
        for (; a < n; ++a) {
            if (++idx[static_cast<std::size_t>(a)] < per_axis) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a == n) break;
    }

    if (spec.kind == SurfaceSpec::Kind::ClosedCurve) {
        // Orientation from the shoelace integral; fixes which rotation of the
        // tangent points into the enclosed region.
        const int K = 512;
        double area2 = 0.0;
        Eigen::VectorXd u0(1);
        u0 << 0.0;
        Eigen::VectorXd prev = s.position(u0);
        for (int k = 1; k <= K; ++k) {
            Eigen::VectorXd uu(1);
            uu << 2.0 * std::numbers::pi * k / K;
            Eigen::VectorXd cur = s.position(uu);
            area2 += prev(0) * cur(1) - prev(1) * cur(0);
            prev = cur;
        }
        s.curve_orient_ = area2 >= 0.0 ? 1 : -1;
    }
    return s;
}

Surface make_wulff_surface(const SphereFunction& F) {
    SurfaceSpec sp;
    sp.kind = SurfaceSpec::Kind::Wulff;
    sp.n = F.n();
    sp.wulff_f = F.spec();
    sp.text = "wulff:" + F.spec().text;
    return make_surface(sp);
}

PointFrame point_frame(const Surface& surface, const Eigen::VectorXd& u,
                       const Eigen::MatrixXd* param_mix) {
    const int n = surface.n();
    const int m = surface.ambient();

    auto jets = surface.chart_jet(u);

    PointFrame pf;
    pf.u = u;
    pf.X.resize(m);
    for (int c = 0; c < m; ++c) pf.X(c) = jets[static_cast<std::size_t>(c)].v;

    Eigen::MatrixXd T(m, n);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < n; ++i) T(c, i) = jets[static_cast<std::size_t>(c)].g(i);

    // Coordinate second fundamental form b_kl = <X_kl, nu> is assembled after
    // nu; chart Hessians are collected first so a parameter mix can transform
    // T and b consistently (a linear reparametrization).
    if (param_mix) {
        if (param_mix->rows() != n || param_mix->cols() != n)
            throw SpecError("param_mix must be n x n");
        T = T * (*param_mix);
    }

    Eigen::MatrixXd G = T.transpose() * T;
    double detG = G.determinant();
    // Immersion floor in two parts: coordinate velocities must not vanish
    // (relative to the position scale), and the normalized tangents must stay
    // independent. detG / prod(G_ii) is scale-free conditioning (exactly 1
    // for orthogonal charts); an absolute detG floor would reject the
    // legitimate sin^4(t1) sin^2(t2) decay of the S^3 chart near Gauss nodes.
    const double vel_floor = 1e-24 * (1.0 + pf.X.squaredNorm());
    for (int i = 0; i < n; ++i)
        if (!(G(i, i) > vel_floor))
            throw NumericalError("degenerate metric at parameter point");
    if (!(detG > kImmersionTol * G.diagonal().prod()))
        throw NumericalError("degenerate metric at parameter point");

    auto [Q, R] = gram_schmidt(T);
    Eigen::VectorXd nu = orthogonal_complement(Q);

    // Inner-normal sign convention. Star-shaped surfaces enclose the origin,
    // so the inner normal opposes the position vector.
    switch (surface.spec().kind) {
    case SurfaceSpec::Kind::Sphere:
    case SurfaceSpec::Kind::Ellipsoid:
    case SurfaceSpec::Kind::RadialGraph:
    case SurfaceSpec::Kind::Wulff:
        if (nu.dot(pf.X) > 0.0) nu = -nu;
        break;
    case SurfaceSpec::Kind::Torus: {
        const double R0 = surface.spec().R;
        const double phi = u(1);
        Eigen::Vector3d center(R0 * std::cos(phi), R0 * std::sin(phi), 0.0);
        if (nu.dot(center - pf.X.head<3>()) < 0.0) nu = -nu;
        break;
    }
    case SurfaceSpec::Kind::ClosedCurve: {
        Eigen::Vector2d tau = Q.col(0).head<2>();
        Eigen::Vector2d inward(-tau(1), tau(0));
        inward *= surface.curve_orientation();
        if (nu.head<2>().dot(inward) < 0.0) nu = -nu;
        break;
    }
    }
    pf.nu = nu;
    pf.frame = Q;

    Eigen::MatrixXd b(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            double s = 0.0;
            for (int c = 0; c < m; ++c) s += jets[static_cast<std::size_t>(c)].h(k, l) * nu(c);
            b(k, l) = s;
            b(l, k) = s;
        }
    if (param_mix) b = param_mix->transpose() * b * (*param_mix);

    // B in the orthonormal frame: with T = Q R, B = R^{-T} b R^{-1}.
    Eigen::MatrixXd W = R.transpose().triangularView<Eigen::Lower>().solve(b);
    Eigen::MatrixXd Bt = R.transpose().triangularView<Eigen::Lower>().solve(W.transpose());
    pf.B = 0.5 * (Bt + Bt.transpose());

    pf.area_element = std::abs(R.diagonal().prod());
    pf.support = pf.X.dot(nu);
    return pf;
}

} // namespace wulffkit
