#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "wulffkit/errors.hpp"

namespace wulffkit {

// Second-order truncated Taylor scalar: value, gradient and Hessian with
// respect to a fixed set of `vars()` independent variables. All arithmetic
// propagates derivatives exactly (to roundoff); the Hessian stays symmetric
// bit-for-bit because every rule below only ever adds entrywise-symmetric
// terms (u.g*v.g^T + v.g*u.g^T is bitwise symmetric since IEEE * and + are
// commutative).
class Jet2 {
public:
    double v = 0.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd h;

    Jet2() = default;

    static Jet2 constant(double value, int nvars) {
        Jet2 j;
        j.v = value;
        j.g = Eigen::VectorXd::Zero(nvars);
        j.h = Eigen::MatrixXd::Zero(nvars, nvars);
        return j;
    }

    static Jet2 variable(double value, int index, int nvars) {
        Jet2 j = constant(value, nvars);
        j.g(index) = 1.0;
        return j;
    }

    int vars() const { return static_cast<int>(g.size()); }

    Jet2 operator-() const {
        Jet2 r;
        r.v = -v;
        r.g = -g;
        r.h = -h;
        return r;
    }

    Jet2& operator+=(const Jet2& o) {
        v += o.v;
        g += o.g;
        h += o.h;
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        v -= o.v;
        g -= o.g;
        h -= o.h;
        return *this;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r += b;
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r -= b;
        return r;
    }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v * b.v;
        r.g = a.v * b.g + b.v * a.g;
        r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
        return r;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        if (std::abs(b.v) <= 1e-14)
            throw DomainError("division by ~0 in jet evaluation");
        Jet2 w;
        w.v = a.v / b.v;
        w.g = (a.g - w.v * b.g) / b.v;
        w.h = (a.h - w.v * b.h - (w.g * b.g.transpose() + b.g * w.g.transpose())) / b.v;
        return w;
    }

    friend Jet2 operator+(const Jet2& a, double c) {
        Jet2 r = a;
        r.v += c;
        return r;
    }
    friend Jet2 operator+(double c, const Jet2& a) { return a + c; }
    friend Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
    friend Jet2 operator-(double c, const Jet2& a) { return -a + c; }
    friend Jet2 operator*(const Jet2& a, double c) {
        Jet2 r;
        r.v = a.v * c;
        r.g = a.g * c;
        r.h = a.h * c;
        return r;
    }
    friend Jet2 operator*(double c, const Jet2& a) { return a * c; }
    friend Jet2 operator/(const Jet2& a, double c) {
        if (std::abs(c) <= 1e-14)
            throw DomainError("division by ~0 in jet evaluation");
        Jet2 r;
        r.v = a.v / c;
        r.g = a.g / c;
        r.h = a.h / c;
        return r;
    }
    friend Jet2 operator/(double c, const Jet2& a) { return constant(c, a.vars()) / a; }
};

// Chain rule for a univariate f applied to a jet: f(u), f'(u), f''(u) given.
inline Jet2 jet_chain(const Jet2& u, double f, double fp, double fpp) {
    Jet2 r;
    r.v = f;
    r.g = fp * u.g;
    r.h = fp * u.h + fpp * (u.g * u.g.transpose());
    return r;
}

inline Jet2 sqrt(const Jet2& u) {
    if (u.v <= 0.0)
        throw DomainError("sqrt of nonpositive value in jet evaluation");
    double s = std::sqrt(u.v);
    return jet_chain(u, s, 0.5 / s, -0.25 / (u.v * s));
}

inline Jet2 exp(const Jet2& u) {
    double e = std::exp(u.v);
    return jet_chain(u, e, e, e);
}

inline Jet2 log(const Jet2& u) {
    if (u.v <= 0.0)
        throw DomainError("log of nonpositive value in jet evaluation");
    return jet_chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

inline Jet2 sin(const Jet2& u) {
    double s = std::sin(u.v), c = std::cos(u.v);
    return jet_chain(u, s, c, -s);
}

inline Jet2 cos(const Jet2& u) {
    double s = std::sin(u.v), c = std::cos(u.v);
    return jet_chain(u, c, -s, -c);
}

// Integer power by exact repeated multiplication of the value, closed-form
// derivative coefficients. Exponent 0 gives the constant 1.
inline double ipow(double x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double r = 1.0, b = x;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

inline Jet2 powi(const Jet2& u, int k) {
    if (k == 0) return Jet2::constant(1.0, u.vars());
    if (k < 0) {
        if (std::abs(u.v) <= 1e-14)
            throw DomainError("negative power of ~0 in jet evaluation");
        return Jet2::constant(1.0, u.vars()) / powi(u, -k);
    }
    double f = ipow(u.v, k);
    double fp = k * ipow(u.v, k - 1);
    double fpp = (k >= 2) ? double(k) * double(k - 1) * ipow(u.v, k - 2) : 0.0;
    return jet_chain(u, f, fp, fpp);
}

// Real power, positive base only (used by the smoothed p-norm family).
inline Jet2 powr(const Jet2& u, double alpha) {
    if (u.v <= 0.0)
        throw DomainError("real power of nonpositive base in jet evaluation");
    double f = std::pow(u.v, alpha);
    double fp = alpha * std::pow(u.v, alpha - 1.0);
    double fpp = alpha * (alpha - 1.0) * std::pow(u.v, alpha - 2.0);
    return jet_chain(u, f, fp, fpp);
}

// ---------------------------------------------------------------------------
// Plain-double counterparts so generic code can run on either scalar.
// ---------------------------------------------------------------------------

inline double powi(double x, int k) { return ipow(x, k); }
inline double powr(double x, double alpha) {
    if (x <= 0.0)
        throw DomainError("real power of nonpositive base");
    return std::pow(x, alpha);
}

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet2& x) { return x.v; }

inline double make_like(double c, double) { return c; }
inline Jet2 make_like(double c, const Jet2& exemplar) {
    return Jet2::constant(c, exemplar.vars());
}

// ---------------------------------------------------------------------------
// First-order forward dual over an arbitrary base scalar. Layered on top of
// Jet2 it yields third-order data for composite maps (the Wulff chart needs
// second parameter-derivatives of grad F~, i.e. third derivatives of F~).
// ---------------------------------------------------------------------------

template <class T>
struct DualN {
    T v;
    std::vector<T> d;

    DualN() = default;
    DualN(T value, std::vector<T> partials) : v(std::move(value)), d(std::move(partials)) {}

    static DualN constant(const T& value, int ndirs, const T& exemplar) {
        DualN r;
        r.v = value;
        r.d.assign(ndirs, make_like(0.0, exemplar));
        return r;
    }

    static DualN variable(const T& value, int index, int ndirs, const T& exemplar) {
        DualN r = constant(value, ndirs, exemplar);
        r.d[index] = make_like(1.0, exemplar);
        return r;
    }

    int dirs() const { return static_cast<int>(d.size()); }

    DualN operator-() const {
        DualN r;
        r.v = -v;
        r.d.reserve(d.size());
        for (const auto& x : d) r.d.push_back(-x);
        return r;
    }

    friend DualN operator+(const DualN& a, const DualN& b) {
        DualN r;
        r.v = a.v + b.v;
        r.d.reserve(a.d.size());
        for (std::size_t i = 0; i < a.d.size(); ++i) r.d.push_back(a.d[i] + b.d[i]);
        return r;
    }
    friend DualN operator-(const DualN& a, const DualN& b) {
        DualN r;
        r.v = a.v - b.v;
        r.d.reserve(a.d.size());
        for (std::size_t i = 0; i < a.d.size(); ++i) r.d.push_back(a.d[i] - b.d[i]);
        return r;
    }
    friend DualN operator*(const DualN& a, const DualN& b) {
        DualN r;
        r.v = a.v * b.v;
        r.d.reserve(a.d.size());
        for (std::size_t i = 0; i < a.d.size(); ++i)
            r.d.push_back(a.d[i] * b.v + a.v * b.d[i]);
        return r;
    }
    friend DualN operator/(const DualN& a, const DualN& b) {
        DualN w;
        w.v = a.v / b.v;
        w.d.reserve(a.d.size());
        for (std::size_t i = 0; i < a.d.size(); ++i)
            w.d.push_back((a.d[i] - w.v * b.d[i]) / b.v);
        return w;
    }

    friend DualN operator+(const DualN& a, double c) {
        DualN r = a;
        r.v = r.v + c;
        return r;
    }
    friend DualN operator+(double c, const DualN& a) { return a + c; }
    friend DualN operator-(const DualN& a, double c) { return a + (-c); }
    friend DualN operator-(double c, const DualN& a) { return -a + c; }
    friend DualN operator*(const DualN& a, double c) {
        DualN r;
        r.v = a.v * c;
        r.d.reserve(a.d.size());
        for (const auto& x : a.d) r.d.push_back(x * c);
        return r;
    }
    friend DualN operator*(double c, const DualN& a) { return a * c; }
    friend DualN operator/(const DualN& a, double c) {
        if (std::abs(c) <= 1e-14)
            throw DomainError("division by ~0 in dual evaluation");
        DualN r;
        r.v = a.v / c;
        r.d.reserve(a.d.size());
        for (const auto& x : a.d) r.d.push_back(x / c);
        return r;
    }
};

template <class T>
DualN<T> dual_chain(const DualN<T>& u, T f, T fp) {
    DualN<T> r;
    r.v = std::move(f);
    r.d.reserve(u.d.size());
    for (const auto& x : u.d) r.d.push_back(fp * x);
    return r;
}

template <class T>
DualN<T> sqrt(const DualN<T>& u) {
    T s = sqrt(u.v);
    T fp = make_like(0.5, u.v) / s;
    return dual_chain(u, std::move(s), std::move(fp));
}

template <class T>
DualN<T> exp(const DualN<T>& u) {
    T e = exp(u.v);
    return dual_chain(u, e, e);
}

template <class T>
DualN<T> log(const DualN<T>& u) {
    T f = log(u.v);
    T fp = make_like(1.0, u.v) / u.v;
    return dual_chain(u, std::move(f), std::move(fp));
}

template <class T>
DualN<T> sin(const DualN<T>& u) {
    return dual_chain(u, sin(u.v), cos(u.v));
}

template <class T>
DualN<T> cos(const DualN<T>& u) {
    return dual_chain(u, cos(u.v), -sin(u.v));
}

template <class T>
DualN<T> powi(const DualN<T>& u, int k) {
    if (k == 0) {
        DualN<T> r = u;
        r.v = make_like(1.0, u.v);
        for (auto& x : r.d) x = make_like(0.0, u.v);
        return r;
    }
    T f = powi(u.v, k);
    T fp = powi(u.v, k - 1) * double(k);
    return dual_chain(u, std::move(f), std::move(fp));
}

template <class T>
DualN<T> powr(const DualN<T>& u, double alpha) {
    T f = powr(u.v, alpha);
    T fp = powr(u.v, alpha - 1.0) * alpha;
    return dual_chain(u, std::move(f), std::move(fp));
}

template <class T>
double scalar_value(const DualN<T>& x) {
    return scalar_value(x.v);
}

template <class T>
DualN<T> make_like(double c, const DualN<T>& exemplar) {
    return DualN<T>::constant(make_like(c, exemplar.v), exemplar.dirs(), exemplar.v);
}

} // namespace wulffkit
