#include "wulffkit/specs.hpp"

#include <algorithm>
#include <charconv>

#include "wulffkit/sampling.hpp"

namespace wulffkit {

namespace {

std::vector<double> parse_number_list(const std::string& body, std::size_t base_offset) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        std::size_t first = tok.find_first_not_of(" \t");
        std::size_t last = tok.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw ParseError("empty number in parameter list", base_offset + pos);
        tok = tok.substr(first, last - first + 1);
        double value = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw ParseError("malformed number '" + tok + "'", base_offset + pos + first);
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::pair<std::string, std::string> split_head(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("expected '<kind>:<parameters>'", 0);
    std::string head = text.substr(0, colon);
    head.erase(std::remove_if(head.begin(), head.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               head.end());
    return {head, text.substr(colon + 1)};
}

// Load-time positivity probe for expression-defined F / rho.
void probe_positive(const ExprAst& ast, int n, const char* what) {
    for (const auto& x : sphere_lattice(n, 200)) {
        double v = eval_value(ast, x);
        if (!(v > 0.0))
            throw SpecError(std::string(what) + " must be positive on S^n; found " +
                            std::to_string(v) + " at a sample point");
    }
}

} // namespace

FSpec parse_fspec(const std::string& text, int ambient_dim) {
    if (text.empty())
        throw ParseError("empty anisotropy spec", 0);
    if (ambient_dim < 2 || ambient_dim > 9)
        throw SpecError("ambient dimension must be in [2,9]");

    auto [head, body] = split_head(text);
    std::size_t body_off = head.size() + 1;

    FSpec f;
    f.ambient = ambient_dim;
    f.text = text;

    if (head == "const") {
        auto v = parse_number_list(body, body_off);
        if (v.size() != 1)
            throw ParseError("const takes exactly one parameter", body_off);
        if (!(v[0] > 0.0))
            throw SpecError("const anisotropy must be positive");
        f.kind = FSpec::Kind::Const;
        f.c = v[0];
    } else if (head == "ellipsoid") {
        auto v = parse_number_list(body, body_off);
        if (static_cast<int>(v.size()) != ambient_dim)
            throw SpecError("ellipsoid needs " + std::to_string(ambient_dim) +
                            " semi-axes, got " + std::to_string(v.size()));
        for (double a : v)
            if (!(a > 0.0))
                throw SpecError("ellipsoid semi-axes must be positive");
        f.kind = FSpec::Kind::Ellipsoid;
        f.axes = v;
    } else if (head == "pnorm") {
        auto v = parse_number_list(body, body_off);
        if (v.size() != 2)
            throw ParseError("pnorm takes parameters <p>,<eps>", body_off);
        if (!(v[0] > 1.0))
            throw SpecError("pnorm exponent must be > 1");
        if (v[1] < 0.0)
            throw SpecError("pnorm smoothing eps must be >= 0");
        f.kind = FSpec::Kind::PNorm;
        f.p = v[0];
        f.eps = v[1];
    } else if (head == "expr") {
        try {
            f.expr = parse_expr(body);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), body_off + e.offset());
        }
        if (f.expr.max_var > ambient_dim)
            throw SpecError("expression references x" + std::to_string(f.expr.max_var) +
                            " beyond ambient dimension " + std::to_string(ambient_dim));
        f.kind = FSpec::Kind::Expr;
        probe_positive(f.expr, ambient_dim - 1, "anisotropy F");
    } else {
        throw ParseError("unknown anisotropy kind '" + head + "'", 0);
    }
    return f;
}

SurfaceSpec parse_surfspec(const std::string& text) {
    return parse_surfspec(text, 0);
}

SurfaceSpec parse_surfspec(const std::string& text, int ambient_dim) {
    if (text.empty())
        throw ParseError("empty surface spec", 0);

    auto [head, body] = split_head(text);
    std::size_t body_off = head.size() + 1;

    SurfaceSpec s;
    s.text = text;

    if (head == "sphere") {
        auto v = parse_number_list(body, body_off);
        if (v.size() != 1)
            throw ParseError("sphere takes exactly one radius", body_off);
        if (!(v[0] > 0.0))
            throw SpecError("sphere radius must be positive");
        s.kind = SurfaceSpec::Kind::Sphere;
        s.R = v[0];
        s.n = ambient_dim > 0 ? ambient_dim - 1 : 2;
    } else if (head == "ellipsoidsurf") {
        auto v = parse_number_list(body, body_off);
        if (v.size() < 2)
            throw SpecError("ellipsoidsurf needs at least two semi-axes");
        for (double a : v)
            if (!(a > 0.0))
                throw SpecError("ellipsoidsurf semi-axes must be positive");
        if (ambient_dim > 0 && static_cast<int>(v.size()) != ambient_dim)
            throw SpecError("ellipsoidsurf axis count disagrees with requested dimension");
        s.kind = SurfaceSpec::Kind::Ellipsoid;
        s.axes = v;
        s.n = static_cast<int>(v.size()) - 1;
    } else if (head == "radial") {
        try {
            s.rho = parse_expr(body);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), body_off + e.offset());
        }
        int ambient = ambient_dim > 0 ? ambient_dim : std::max(3, s.rho.max_var);
        if (s.rho.max_var > ambient)
            throw SpecError("radial expression references x" + std::to_string(s.rho.max_var) +
                            " beyond ambient dimension " + std::to_string(ambient));
        s.kind = SurfaceSpec::Kind::RadialGraph;
        s.n = ambient - 1;
        probe_positive(s.rho, s.n, "radial graph rho");
    } else if (head == "torus") {
        auto v = parse_number_list(body, body_off);
        if (v.size() != 2)
            throw ParseError("torus takes parameters <R>,<r>", body_off);
        if (!(v[0] > v[1] && v[1] > 0.0))
            throw SpecError("torus requires R > r > 0");
        s.kind = SurfaceSpec::Kind::Torus;
        s.R = v[0];
        s.r = v[1];
        s.n = 2;
    } else if (head == "curve") {
        std::size_t semi = body.find(';');
        if (semi == std::string::npos)
            throw ParseError("curve takes '<xexpr>;<yexpr>'", body_off);
        try {
            s.cx = parse_expr(body.substr(0, semi));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), body_off + e.offset());
        }
        try {
            s.cy = parse_expr(body.substr(semi + 1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), body_off + semi + 1 + e.offset());
        }
        if (s.cx.max_var > 1 || s.cy.max_var > 1)
            throw SpecError("curve expressions use the single parameter x1");
        s.kind = SurfaceSpec::Kind::ClosedCurve;
        s.n = 1;
    } else if (head == "wulff") {
        int ambient = ambient_dim > 0 ? ambient_dim : 3;
        s.wulff_f = parse_fspec(body, ambient);
        s.kind = SurfaceSpec::Kind::Wulff;
        s.n = ambient - 1;
    } else {
        throw ParseError("unknown surface kind '" + head + "'", 0);
    }
    return s;
}

} // namespace wulffkit
