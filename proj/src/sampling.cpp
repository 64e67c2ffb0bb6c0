#include "wulffkit/sampling.hpp"

#include <cmath>
#include <numbers>

#include "wulffkit/errors.hpp"

namespace wulffkit {

namespace {

double frac(double x) { return x - std::floor(x); }

// Invert (psi - sin psi cos psi) / pi = t on [0, pi] (polar CDF of S^3).
double invert_sin2_cdf(double t) {
    double lo = 0.0, hi = std::numbers::pi;
    double psi = std::numbers::pi * t;
    for (int it = 0; it < 80; ++it) {
        double f = (psi - std::sin(psi) * std::cos(psi)) / std::numbers::pi - t;
        if (f > 0)
            hi = psi;
        else
            lo = psi;
        double d = 2.0 * std::sin(psi) * std::sin(psi) / std::numbers::pi;
        double next = (d > 1e-12) ? psi - f / d : 0.5 * (lo + hi);
        psi = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
        if (hi - lo < 1e-15) break;
    }
    return psi;
}

} // namespace

std::vector<Eigen::VectorXd> sphere_lattice(int n, int count) {
    if (n < 1 || n > 3)
        throw SpecError("sphere_lattice supports n in {1,2,3}");
    if (count < 1)
        throw SpecError("sphere_lattice needs a positive sample count");

    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(count));

    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd x(n + 1);
        if (n == 1) {
            double t = 2.0 * std::numbers::pi * (k + 0.5) / count;
            x << std::cos(t), std::sin(t);
        } else if (n == 2) {
            double z = 1.0 - (2.0 * k + 1.0) / count;
            double phi = 2.0 * std::numbers::pi * frac(k * golden);
            double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            x << s * std::cos(phi), s * std::sin(phi), z;
        } else {
            double u1 = frac((k + 0.5) * std::numbers::sqrt2) ;
            double u2 = (k + 0.5) / count;
            double u3 = frac(k * golden);
            double psi = invert_sin2_cdf(u2);
            double z = 1.0 - 2.0 * u1;
            double phi = 2.0 * std::numbers::pi * u3;
            double s2 = std::sqrt(std::max(0.0, 1.0 - z * z));
            double sp = std::sin(psi);
            x << sp * s2 * std::cos(phi), sp * s2 * std::sin(phi), sp * z, std::cos(psi);
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

} // namespace wulffkit
