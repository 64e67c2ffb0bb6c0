#include "wulffkit/integrals.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace wulffkit {

QuadratureGrid build_grid(const Surface& surface, const std::vector<int>& res) {
    const auto& domain = surface.domain();
    const int n = surface.n();
    if (static_cast<int>(res.size()) != n)
        throw SpecError("build_grid: one resolution per axis required");
    for (int r : res)
        if (r < 8)
            throw SpecError("build_grid: resolution must be at least 8 per axis");

    std::vector<std::vector<double>> axis_nodes(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> axis_weights(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const auto& ax = domain[static_cast<std::size_t>(a)];
        const int m = res[static_cast<std::size_t>(a)];
        if (ax.periodic) {
            const double h = (ax.hi - ax.lo) / m;
            for (int k = 0; k < m; ++k) {
                axis_nodes[static_cast<std::size_t>(a)].push_back(ax.lo + k * h);
                axis_weights[static_cast<std::size_t>(a)].push_back(h);
            }
        } else {
            auto [x, w] = gauss_legendre(m, ax.lo, ax.hi);
            axis_nodes[static_cast<std::size_t>(a)] = std::move(x);
            axis_weights[static_cast<std::size_t>(a)] = std::move(w);
        }
    }

    QuadratureGrid grid;
    grid.res = res;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(res[static_cast<std::size_t>(a)]);
    grid.nodes.reserve(total);
    grid.weights.reserve(total);

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        Eigen::VectorXd u(n);
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            u(a) = axis_nodes[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
            w *= axis_weights[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        }
        grid.nodes.push_back(std::move(u));
        grid.weights.push_back(w);
        int a = 0;
        for (; a < n; ++a) {
            if (++idx[static_cast<std::size_t>(a)] < res[static_cast<std::size_t>(a)]) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a == n) break;
    }
    return grid;
}

std::vector<NodeData> evaluate_nodes(const Surface& surface, const SphereFunction& F,
                                     const QuadratureGrid& grid, int threads) {
    if (F.n() != surface.n())
        throw SpecError("evaluate_nodes: F and surface dimensions disagree");

    const std::size_t count = grid.nodes.size();
    std::vector<NodeData> out(count);

    if (threads <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = hc == 0 ? 1 : static_cast<int>(hc);
    }
    threads = std::min<int>(threads, static_cast<int>(count));
    threads = std::max(threads, 1);

    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t k = lo; k < hi; ++k) {
                NodeData nd;
                nd.frame = point_frame(surface, grid.nodes[k]);
                Eigen::MatrixXd A = anisotropy_matrix(F, nd.frame.nu, nd.frame.frame);
                try {
                    nd.curv = curvature_packet(A, nd.frame.B);
                } catch (const CholeskyError& e) {
                    std::ostringstream os;
                    os << e.what() << " at node " << k << ", u = [" << grid.nodes[k].transpose() << "]";
                    throw CholeskyError(os.str());
                }
                nd.F = F.value(nd.frame.nu);
                out[k] = std::move(nd);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (threads == 1) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::size_t chunk = (count + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    if (first_error) std::rethrow_exception(first_error);
    return out;
}

double integrate(const QuadratureGrid& grid, const std::vector<NodeData>& nodes,
                 const std::function<double(const NodeData&)>& integrand) {
    if (grid.nodes.size() != nodes.size())
        throw SpecError("integrate: grid/node count mismatch");
    CompensatedSum sum;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        sum.add(grid.weights[k] * nodes[k].frame.area_element * integrand(nodes[k]));
    return sum.value();
}

std::vector<ResidualEntry> minkowski_residuals(const QuadratureGrid& grid,
                                               const std::vector<NodeData>& nodes) {
    if (nodes.empty())
        throw SpecError("minkowski_residuals: no nodes");
    const int n = nodes.front().curv.n();

    const double denom =
        integrate(grid, nodes, [](const NodeData& nd) { return nd.F; });

    std::vector<ResidualEntry> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        ResidualEntry e;
        e.r = r;
        e.raw = integrate(grid, nodes, [r](const NodeData& nd) {
            return nd.F * nd.curv.M(r) + nd.curv.M(r + 1) * nd.frame.support;
        });
        e.normalized = e.raw / denom;
        out.push_back(e);
    }
    return out;
}

Diagnostics diagnostics(const std::vector<NodeData>& nodes, int n) {
    if (nodes.empty())
        throw SpecError("diagnostics: no nodes");

    Diagnostics d;
    d.support_min = std::numeric_limits<double>::infinity();
    d.support_max = -std::numeric_limits<double>::infinity();
    d.min_eig_B = std::numeric_limits<double>::infinity();
    d.M_inf.assign(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::infinity());
    d.M_sup.assign(static_cast<std::size_t>(n) + 1, -std::numeric_limits<double>::infinity());
    d.maclaurin_margin.assign(static_cast<std::size_t>(std::max(0, n - 1)),
                              std::numeric_limits<double>::infinity());
    d.maclaurin_defined.assign(d.maclaurin_margin.size(), 0);
    d.newton_margin.assign(static_cast<std::size_t>(std::max(0, n - 1)),
                           std::numeric_limits<double>::infinity());

    for (int k = 0; k <= n; ++k)
        for (int r = k + 1; r <= n; ++r) {
            RatioStat rs;
            rs.k = k;
            rs.r = r;
            rs.min = std::numeric_limits<double>::infinity();
            rs.max = -std::numeric_limits<double>::infinity();
            d.ratios.push_back(rs);
        }

    for (const auto& nd : nodes) {
        d.support_min = std::min(d.support_min, nd.frame.support);
        d.support_max = std::max(d.support_max, nd.frame.support);
        d.min_eig_B = std::min(d.min_eig_B, jacobi_eigenvalues(nd.frame.B)(0));

        const auto& M = nd.curv.M;
        for (int r = 0; r <= n; ++r) {
            d.M_inf[static_cast<std::size_t>(r)] = std::min(d.M_inf[static_cast<std::size_t>(r)], M(r));
            d.M_sup[static_cast<std::size_t>(r)] = std::max(d.M_sup[static_cast<std::size_t>(r)], M(r));
        }

        const auto& lam = nd.curv.lambda;
        double spread = lam(n - 1) - lam(0);
        d.lambda_spread_max = std::max(d.lambda_spread_max, spread);

        if (n >= 2) {
            double lhs = M(1) * M(1) - M(2);
            CompensatedSum rhs;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double diff = lam(j) - lam(i);
                    rhs.add(diff * diff);
                }
            double rhs_v = rhs.value() / (double(n) * n * (n - 1));
            d.m1m2_identity_residual =
                std::max(d.m1m2_identity_residual, std::abs(lhs - rhs_v));
            d.m1m2_negativity = std::max(d.m1m2_negativity, std::max(0.0, -lhs));
        }

        for (int r = 2; r <= n; ++r) {
            if (M(r) > 0.0) {
                double margin = M(r - 1) - std::pow(M(r), double(r - 1) / double(r));
                auto& slot = d.maclaurin_margin[static_cast<std::size_t>(r - 2)];
                slot = std::min(slot, margin);
                ++d.maclaurin_defined[static_cast<std::size_t>(r - 2)];
            }
        }
        for (int k = 0; k + 2 <= n; ++k) {
            double margin = M(k + 1) * M(k + 1) - M(k) * M(k + 2);
            auto& slot = d.newton_margin[static_cast<std::size_t>(k)];
            slot = std::min(slot, margin);
        }

        std::size_t ridx = 0;
        for (int k = 0; k <= n; ++k)
            for (int r = k + 1; r <= n; ++r, ++ridx) {
                auto& rs = d.ratios[ridx];
                if (std::abs(M(k)) > 1e-12) {
                    double q = M(r) / M(k);
                    rs.min = std::min(rs.min, q);
                    rs.max = std::max(rs.max, q);
                } else {
                    ++rs.undefined;
                }
            }
    }

    d.fixed_sign_support = d.support_min * d.support_max > 0.0;
    d.convex = d.min_eig_B > -1e-8;

    d.M_constant.assign(static_cast<std::size_t>(n) + 1, false);
    for (int r = 0; r <= n; ++r) {
        double scale = std::max(1.0, std::max(std::abs(d.M_sup[static_cast<std::size_t>(r)]),
                                              std::abs(d.M_inf[static_cast<std::size_t>(r)])));
        d.M_constant[static_cast<std::size_t>(r)] =
            (d.M_sup[static_cast<std::size_t>(r)] - d.M_inf[static_cast<std::size_t>(r)]) <= 1e-6 * scale;
    }

    double lam_scale = 1.0;
    for (const auto& nd : nodes)
        lam_scale = std::max(lam_scale, std::abs(nd.curv.lambda(n - 1)));
    d.wulff_candidate = d.lambda_spread_max <= 1e-6 * lam_scale;
    return d;
}

VerificationReport run_verification(const SurfaceSpec& surface_spec, const FSpec& f_spec,
                                    const VerifyOptions& opts) {
    VerificationReport rep;
    rep.surface_text = surface_spec.text;
    rep.f_text = f_spec.text;

    SphereFunction F(f_spec);
    rep.audit = convexity_audit(F, opts.audit_samples, opts.audit_tol);
    rep.audit_passed = rep.audit.pass;
    rep.forced = opts.force;
    if (!rep.audit.pass && !opts.force)
        return rep;

    Surface surface = make_surface(surface_spec);
    if (surface.n() != F.n())
        throw SpecError("surface and anisotropy dimensions disagree");

    std::vector<int> res = opts.res;
    if (res.empty())
        throw SpecError("run_verification: no resolution given");

    for (int level = 0; level <= std::max(0, opts.converge); ++level) {
        QuadratureGrid grid = build_grid(surface, res);
        auto nodes = evaluate_nodes(surface, F, grid, opts.threads);
        auto residuals = minkowski_residuals(grid, nodes);

        ConvergenceLevel lvl;
        lvl.res = res;
        for (const auto& e : residuals) lvl.normalized.push_back(e.normalized);
        rep.convergence.push_back(std::move(lvl));

        if (level == std::max(0, opts.converge)) {
            rep.grid_res = res;
            rep.residuals = std::move(residuals);
            rep.diag = diagnostics(nodes, surface.n());
        }
        for (auto& x : res) x *= 2;
    }
    return rep;
}

std::vector<std::vector<double>> convergence_slopes(const std::vector<ConvergenceLevel>& levels) {
    constexpr double floor = 1e-13;
    std::vector<std::vector<double>> out;
    for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
        std::vector<double> slopes;
        const auto& coarse = levels[l].normalized;
        const auto& fine = levels[l + 1].normalized;
        for (std::size_t r = 0; r < coarse.size() && r < fine.size(); ++r) {
            double ec = std::abs(coarse[r]), ef = std::abs(fine[r]);
            slopes.push_back((ec > floor && ef > floor)
                                 ? std::log2(ec / ef)
                                 : std::numeric_limits<double>::quiet_NaN());
        }
        out.push_back(std::move(slopes));
    }
    return out;
}

namespace {

nlohmann::json diag_to_json(const Diagnostics& d) {
    nlohmann::json j;
    j["support_min"] = d.support_min;
    j["support_max"] = d.support_max;
    j["fixed_sign_support"] = d.fixed_sign_support;
    j["min_eig_B"] = d.min_eig_B;
    j["convex"] = d.convex;
    j["M_inf"] = d.M_inf;
    j["M_sup"] = d.M_sup;
    j["Mr_constant"] = d.M_constant;
    j["m1m2_identity_residual"] = d.m1m2_identity_residual;
    j["m1m2_negativity"] = d.m1m2_negativity;
    j["maclaurin_margin"] = d.maclaurin_margin;
    j["maclaurin_defined"] = d.maclaurin_defined;
    j["newton_margin"] = d.newton_margin;
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& rs : d.ratios) {
        nlohmann::json e;
        e["r"] = rs.r;
        e["k"] = rs.k;
        if (rs.min <= rs.max) {
            e["min"] = rs.min;
            e["max"] = rs.max;
        } else {
            e["min"] = nullptr;
            e["max"] = nullptr;
        }
        e["undefined_nodes"] = rs.undefined;
        ratios.push_back(e);
    }
    j["ratios"] = ratios;
    j["lambda_spread_max"] = d.lambda_spread_max;
    j["wulff_candidate"] = d.wulff_candidate;
    return j;
}

} // namespace

std::string report_to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["surface"] = report.surface_text;
    j["F"] = report.f_text;
    j["grid"] = report.grid_res;

    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& e : report.residuals) {
        nlohmann::json je;
        je["r"] = e.r;
        je["raw"] = e.raw;
        je["normalized"] = e.normalized;
        residuals.push_back(je);
    }
    j["residuals"] = residuals;
    if (!report.residuals.empty())
        j["diagnostics"] = diag_to_json(report.diag);
    else
        j["diagnostics"] = nullptr;

    nlohmann::json conv = nlohmann::json::array();
    for (const auto& lvl : report.convergence) {
        nlohmann::json je;
        je["resolution"] = lvl.res;
        je["normalized_residuals"] = lvl.normalized;
        conv.push_back(je);
    }
    j["convergence"] = conv;

    nlohmann::json slopes = nlohmann::json::array();
    for (const auto& pair : convergence_slopes(report.convergence)) {
        nlohmann::json row = nlohmann::json::array();
        for (double s : pair) {
            if (std::isnan(s))
                row.push_back(nullptr); // level at the roundoff floor
            else
                row.push_back(s);
        }
        slopes.push_back(row);
    }
    j["convergence_slopes"] = slopes;

    nlohmann::json audit;
    audit["samples"] = report.audit.samples;
    audit["min_eigenvalue"] = report.audit.min_eigenvalue;
    audit["pass"] = report.audit.pass;
    audit["tol"] = report.audit.tol;
    j["audit"] = audit;
    j["forced"] = report.forced;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const VerificationReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "resolution,r,normalized_residual\n";
    for (const auto& lvl : report.convergence) {
        std::ostringstream rs;
        for (std::size_t i = 0; i < lvl.res.size(); ++i) {
            if (i) rs << "x";
            rs << lvl.res[i];
        }
        for (std::size_t r = 0; r < lvl.normalized.size(); ++r)
            os << rs.str() << "," << r << "," << lvl.normalized[r] << "\n";
    }
    return os.str();
}

} // namespace wulffkit
