#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "wulffkit/wulff.hpp"

namespace py = pybind11;
using namespace wulffkit;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    py::module_ json_mod = py::module_::import("json");
    return json_mod.attr("loads")(j.dump());
}

py::dict audit_to_dict(const ConvexityReport& rep) {
    py::dict d;
    d["samples"] = rep.samples;
    d["min_eigenvalue"] = rep.min_eigenvalue;
    d["argmin"] = std::vector<double>(rep.argmin.data(), rep.argmin.data() + rep.argmin.size());
    d["pass"] = rep.pass;
    d["tol"] = rep.tol;
    return d;
}

void translate_exceptions() {
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const SpecError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        } catch (const NumericalError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        }
    });
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wulff shapes, anisotropic curvatures and Minkowski-type integral "
              "verification for closed hypersurfaces";

    translate_exceptions();

    m.def(
        "parse_fspec",
        [](const std::string& text, int ambient) {
            FSpec f = parse_fspec(text, ambient);
            py::dict d;
            d["text"] = f.text;
            d["ambient"] = f.ambient;
            d["kind"] = f.kind == FSpec::Kind::Const       ? "const"
                        : f.kind == FSpec::Kind::Ellipsoid ? "ellipsoid"
                        : f.kind == FSpec::Kind::PNorm     ? "pnorm"
                                                           : "expr";
            return d;
        },
        py::arg("text"), py::arg("ambient") = 3,
        "Parse and validate an anisotropy spec.");

    m.def(
        "parse_surfspec",
        [](const std::string& text, int ambient) {
            SurfaceSpec s = ambient > 0 ? parse_surfspec(text, ambient) : parse_surfspec(text);
            py::dict d;
            d["text"] = s.text;
            d["n"] = s.n;
            return d;
        },
        py::arg("text"), py::arg("ambient") = 0,
        "Parse and validate a surface spec.");

    m.def(
        "convexity_audit",
        [](const std::string& f_text, int ambient, int samples, double tol) {
            SphereFunction F(parse_fspec(f_text, ambient));
            return audit_to_dict(convexity_audit(F, samples, tol));
        },
        py::arg("f"), py::arg("ambient") = 3, py::arg("samples") = 2000,
        py::arg("tol") = 1e-8,
        "Scan S^n for the minimum eigenvalue of A_F = D^2 F + F 1.");

    m.def(
        "wulff_point",
        [](const std::string& f_text, const Eigen::VectorXd& x) {
            SphereFunction F(parse_fspec(f_text, static_cast<int>(x.size())));
            return wulff_point(F, x);
        },
        py::arg("f"), py::arg("x"),
        "Wulff map phi(x) = F(x) x + grad F at a unit vector x.");

    m.def(
        "wulff_obj",
        [](const std::string& f_text, const std::string& path, int res_theta, int res_phi) {
            SphereFunction F(parse_fspec(f_text, 3));
            Mesh mesh = wulff_mesh(F, res_theta, res_phi);
            write_obj(mesh, path);
            return py::make_tuple(mesh.vertices.size(), mesh.triangles.size());
        },
        py::arg("f"), py::arg("path"), py::arg("res_theta") = 64, py::arg("res_phi") = 128,
        "Triangulate the Wulff shape (n = 2) and write an OBJ file.");

    m.def(
        "wulff_selftest",
        [](const std::string& f_text, int ambient, const std::vector<int>& res, int threads) {
            SphereFunction F(parse_fspec(f_text, ambient));
            WulffSelfTest st = wulff_selftest(F, res, threads);
            py::dict d;
            d["sup_lambda_dev"] = st.sup_lambda_dev;
            d["nodes"] = st.nodes;
            return d;
        },
        py::arg("f"), py::arg("ambient") = 3,
        py::arg("res") = std::vector<int>{48, 96}, py::arg("threads") = 0,
        "Check that the Wulff shape has all anisotropic curvatures equal to 1.");

    m.def(
        "verify",
        [](const std::string& surface, const std::string& f, int ambient,
           const std::vector<int>& res, int converge, int threads, bool force) {
            SurfaceSpec ss = ambient > 0 ? parse_surfspec(surface, ambient)
                                         : parse_surfspec(surface);
            FSpec fs = parse_fspec(f, ss.ambient());
            VerifyOptions opts;
            opts.res = res;
            opts.converge = converge;
            opts.threads = threads;
            opts.force = force;
            VerificationReport rep = run_verification(ss, fs, opts);
            return json_to_py(nlohmann::json::parse(report_to_json(rep)));
        },
        py::arg("surface"), py::arg("f"), py::arg("ambient") = 0,
        py::arg("res") = std::vector<int>{64, 128}, py::arg("converge") = 0,
        py::arg("threads") = 0, py::arg("force") = false,
        "Minkowski residuals and characterization diagnostics as a dict.");
}
