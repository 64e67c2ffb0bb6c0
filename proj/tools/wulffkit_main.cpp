#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wulffkit/wulff.hpp"

namespace {

using namespace wulffkit;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;      // audit or tolerance failure
constexpr int kExitUsage = 2;     // usage / parse errors
constexpr int kExitNumerical = 3; // Cholesky or other numerical failure

std::vector<int> parse_resolution(const std::string& text, int n) {
    std::vector<int> res;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
        try {
            res.push_back(std::stoi(tok));
        } catch (...) {
            throw SpecError("malformed resolution '" + text + "'");
        }
    }
    if (static_cast<int>(res.size()) != n)
        throw SpecError("resolution '" + text + "' has " + std::to_string(res.size()) +
                        " axes, surface needs " + std::to_string(n));
    for (int r : res)
        if (r < 8 || r > 4096)
            throw SpecError("resolution per axis must be in [8, 4096]");
    return res;
}

std::vector<int> default_resolution(int n) {
    if (n == 1) return {256};
    if (n == 2) return {64, 128};
    return {24, 24, 48};
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("WULFFKIT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0; // hardware default
}

void emit(const std::string& payload, const std::string& path) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream os(path);
    if (!os)
        throw SpecError("cannot open '" + path + "' for writing");
    os << payload;
}

nlohmann::json audit_json(const ConvexityReport& rep) {
    nlohmann::json j;
    j["samples"] = rep.samples;
    j["min_eigenvalue"] = rep.min_eigenvalue;
    std::vector<double> argmin(rep.argmin.data(), rep.argmin.data() + rep.argmin.size());
    j["argmin"] = argmin;
    j["pass"] = rep.pass;
    j["tol"] = rep.tol;
    return j;
}

int cmd_convexity(const std::string& f_text, int dim, int samples, double tol,
                  const std::string& format, const std::string& out) {
    FSpec fs = parse_fspec(f_text, dim);
    SphereFunction F(fs);
    ConvexityReport rep = convexity_audit(F, samples, tol);

    if (format == "json") {
        emit(audit_json(rep).dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os.precision(12);
        os << "convexity audit for F = " << f_text << "\n"
           << "  samples        " << rep.samples << "\n"
           << "  min eigenvalue " << rep.min_eigenvalue << "\n"
           << "  tolerance      " << rep.tol << "\n"
           << "  result         " << (rep.pass ? "PASS" : "FAIL") << "\n";
        emit(os.str(), out);
    }
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_wulff(const std::string& f_text, int dim, const std::string& res_text,
              const std::string& out, bool selftest, bool force, int samples,
              int threads) {
    FSpec fs = parse_fspec(f_text, dim);
    SphereFunction F(fs);

    ConvexityReport audit = convexity_audit(F);
    if (!audit.pass) {
        std::cerr << "convexity audit FAILED (min eigenvalue " << audit.min_eigenvalue
                  << ")" << (force ? "; continuing under --force" : "") << "\n";
        if (!force) return kExitFail;
    }

    const int n = F.n();
    std::vector<int> selftest_res = default_resolution(n);

    if (n == 2) {
        std::vector<int> res =
            res_text.empty() ? std::vector<int>{64, 128} : parse_resolution(res_text, 2);
        Mesh mesh = wulff_mesh(F, res[0], res[1]);
        write_obj(mesh, out);
        std::cout << "wrote " << mesh.vertices.size() << " vertices, "
                  << mesh.triangles.size() << " triangles to " << out << "\n";
        selftest_res = res;
    } else {
        if (!res_text.empty()) selftest_res = parse_resolution(res_text, n);
        std::ofstream os(out);
        if (!os)
            throw SpecError("cannot open '" + out + "' for writing");
        write_wulff_csv(F, samples, os);
        std::cout << "wrote " << samples << " samples to " << out << "\n";
    }

    if (selftest) {
        WulffSelfTest st = wulff_selftest(F, selftest_res, resolve_threads(threads));
        std::cout.precision(12);
        std::cout << "selftest: sup |lambda_i - 1| = " << st.sup_lambda_dev << " over "
                  << st.nodes << " nodes\n";
    }
    return kExitPass;
}

int cmd_verify(const std::string& surface_text, const std::string& f_text, int dim,
               const std::string& res_text, int converge, double tol,
               const std::string& format, const std::string& out, bool force,
               int threads) {
    SurfaceSpec ss = dim > 0 ? parse_surfspec(surface_text, dim) : parse_surfspec(surface_text);
    FSpec fs = parse_fspec(f_text, ss.ambient());
    if (ss.n < 1 || ss.n > 3)
        throw SpecError("verify supports surface dimension n in {1,2,3}");

    VerifyOptions opts;
    opts.res = res_text.empty() ? default_resolution(ss.n) : parse_resolution(res_text, ss.n);
    opts.converge = converge;
    opts.threads = resolve_threads(threads);
    opts.force = force;

    VerificationReport rep = run_verification(ss, fs, opts);

    emit(format == "csv" ? report_to_csv(rep) : report_to_json(rep), out);

    if (!rep.audit_passed && !force) return kExitFail;
    for (const auto& e : rep.residuals)
        if (std::abs(e.normalized) > tol) return kExitFail;
    return kExitPass;
}

int cmd_report(const std::string& surface_text, const std::string& f_text, int dim,
               const std::string& res_text, const std::string& out, bool force,
               int threads) {
    SurfaceSpec ss = dim > 0 ? parse_surfspec(surface_text, dim) : parse_surfspec(surface_text);
    FSpec fs = parse_fspec(f_text, ss.ambient());
    if (ss.n < 1 || ss.n > 3)
        throw SpecError("report supports surface dimension n in {1,2,3}");

    SphereFunction F(fs);
    ConvexityReport audit = convexity_audit(F);
    if (!audit.pass && !force) {
        std::cerr << "convexity audit FAILED (min eigenvalue " << audit.min_eigenvalue << ")\n";
        return kExitFail;
    }

    Surface surface = make_surface(ss);
    std::vector<int> res = res_text.empty() ? default_resolution(ss.n) : parse_resolution(res_text, ss.n);
    QuadratureGrid grid = build_grid(surface, res);
    auto nodes = evaluate_nodes(surface, F, grid, resolve_threads(threads));

    std::ostringstream os;
    os.precision(17);
    const int n = surface.n(), m = surface.ambient();
    for (int a = 0; a < n; ++a) os << "u" << a + 1 << ",";
    for (int c = 0; c < m; ++c) os << "X" << c + 1 << ",";
    for (int c = 0; c < m; ++c) os << "nu" << c + 1 << ",";
    os << "support,F,";
    for (int i = 0; i < n; ++i) os << "lambda" << i + 1 << ",";
    for (int r = 0; r <= n; ++r) os << "M" << r << (r < n ? "," : "\n");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& nd = nodes[k];
        for (int a = 0; a < n; ++a) os << grid.nodes[k](a) << ",";
        for (int c = 0; c < m; ++c) os << nd.frame.X(c) << ",";
        for (int c = 0; c < m; ++c) os << nd.frame.nu(c) << ",";
        os << nd.frame.support << "," << nd.F << ",";
        for (int i = 0; i < n; ++i) os << nd.curv.lambda(i) << ",";
        for (int r = 0; r <= n; ++r) os << nd.curv.M(r) << (r < n ? "," : "\n");
    }
    emit(os.str(), out);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wulffkit: Wulff shapes, anisotropic curvatures and Minkowski-type "
                 "integral verification for closed hypersurfaces"};
    app.require_subcommand(1);

    std::string f_text, surface_text, res_text, out, format = "json";
    int dim = 0, samples = 2000, converge = 0, threads = 0, csv_samples = 1000;
    double tol_aud = 1e-8, tol_verify = 1e-6;
    bool selftest = false, force = false;

    auto* conv = app.add_subcommand("convexity", "audit the convexity condition of F");
    conv->add_option("--f", f_text, "anisotropy spec")->required();
    conv->add_option("--dim", dim, "ambient dimension (default 3)")->default_val(3);
    conv->add_option("--samples", samples, "lattice sample count")->default_val(2000);
    conv->add_option("--tol", tol_aud, "pass tolerance on the minimum eigenvalue")
        ->default_val(1e-8);
    conv->add_option("--format", format, "json|text")->default_val("json");
    conv->add_option("-o,--output", out, "output file (default stdout)");

    auto* wul = app.add_subcommand("wulff", "construct and export the Wulff shape");
    wul->add_option("--f", f_text, "anisotropy spec")->required();
    wul->add_option("--dim", dim, "ambient dimension (default 3)")->default_val(3);
    wul->add_option("--res", res_text, "mesh resolution, e.g. 96x192");
    wul->add_option("-o,--output", out, "output path (.obj for n=2, .csv otherwise)")
        ->required();
    wul->add_flag("--selftest", selftest, "verify all anisotropic curvatures equal 1");
    wul->add_flag("--force", force, "proceed even if the convexity audit fails");
    wul->add_option("--samples", csv_samples, "CSV sample count for n != 2")->default_val(1000);
    wul->add_option("--threads", threads, "worker threads (env WULFFKIT_THREADS)");

    auto* ver = app.add_subcommand("verify", "Minkowski residuals and diagnostics");
    ver->add_option("--surface", surface_text, "surface spec")->required();
    ver->add_option("--f", f_text, "anisotropy spec")->required();
    ver->add_option("--dim", dim, "ambient dimension override");
    ver->add_option("--res", res_text, "base grid resolution, e.g. 64x128");
    ver->add_option("--converge", converge, "number of grid doublings")->default_val(0);
    ver->add_option("--tol", tol_verify, "pass tolerance on normalized residuals")
        ->default_val(1e-6);
    ver->add_option("--format", format, "json|csv")->default_val("json");
    ver->add_option("-o,--output", out, "output file (default stdout)");
    ver->add_flag("--force", force, "run even if the convexity audit fails");
    ver->add_option("--threads", threads, "worker threads (env WULFFKIT_THREADS)");

    auto* repc = app.add_subcommand("report", "per-node curvature dump (CSV)");
    repc->add_option("--surface", surface_text, "surface spec")->required();
    repc->add_option("--f", f_text, "anisotropy spec")->required();
    repc->add_option("--dim", dim, "ambient dimension override");
    repc->add_option("--res", res_text, "grid resolution");
    repc->add_option("-o,--output", out, "output file (default stdout)");
    repc->add_flag("--force", force, "run even if the convexity audit fails");
    repc->add_option("--threads", threads, "worker threads (env WULFFKIT_THREADS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (conv->parsed())
            return cmd_convexity(f_text, dim, samples, tol_aud, format, out);
        if (wul->parsed())
            return cmd_wulff(f_text, dim, res_text, out, selftest, force, csv_samples, threads);
        if (ver->parsed())
            return cmd_verify(surface_text, f_text, dim, res_text, converge, tol_verify,
                              format, out, force, threads);
        if (repc->parsed())
            return cmd_report(surface_text, f_text, dim, res_text, out, force, threads);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
