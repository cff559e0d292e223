// common.hpp — scalar-generic complex arithmetic and shared utilities.
//
// All heavy numerics in this library are templated on a real scalar type R,
// which is double for ordinary work and a boost::multiprecision float for
// the rate experiments whose singular values fall far below double's noise
// floor. std::complex<R> is only specified for builtin floats, so we carry a
// minimal complex template Cx<R> that works for any R providing the usual
// free functions (sqrt, exp, log, cos, sin, atan2, abs).

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace merolab {

using std::abs;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <typename R>
inline R pi_const() {
    return atan2(R(0), R(-1));
}

// Machine epsilon of the active scalar.
template <typename R>
inline R eps_of() {
    return std::numeric_limits<R>::epsilon();
}

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& m) : std::runtime_error(m) {}
};
struct config_error : std::runtime_error {
    explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Cx<R>: complex numbers over an arbitrary real scalar.
// ---------------------------------------------------------------------------

template <typename R>
struct Cx {
    R re{}, im{};

    Cx() = default;
    Cx(R r) : re(std::move(r)), im(R(0)) {}
    Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
    Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
    Cx& operator*=(const Cx& o) {
        R r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cx& operator/=(const Cx& o) {
        // Smith's algorithm; avoids overflow for wildly scaled parts.
        if (abs(o.re) >= abs(o.im)) {
            R t = o.im / o.re, d = o.re + o.im * t;
            R r = (re + im * t) / d;
            im = (im - re * t) / d;
            re = r;
        } else {
            R t = o.re / o.im, d = o.re * t + o.im;
            R r = (re * t + im) / d;
            im = (im * t - re) / d;
            re = r;
        }
        return *this;
    }
    Cx& operator*=(const R& s) { re *= s; im *= s; return *this; }
    Cx& operator/=(const R& s) { re /= s; im /= s; return *this; }

    friend Cx operator+(Cx a, const Cx& b) { return a += b; }
    friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
    friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
    friend Cx operator/(Cx a, const Cx& b) { return a /= b; }
    friend Cx operator+(Cx a, const R& b) { a.re += b; return a; }
    friend Cx operator-(Cx a, const R& b) { a.re -= b; return a; }
    friend Cx operator+(const R& b, Cx a) { a.re = b + a.re; return a; }
    friend Cx operator-(const R& b, const Cx& a) { return Cx(b - a.re, -a.im); }
    friend Cx operator*(Cx a, const R& s) { return a *= s; }
    friend Cx operator*(const R& s, Cx a) { return a *= s; }
    friend Cx operator/(Cx a, const R& s) { return a /= s; }
    friend Cx operator/(const R& s, const Cx& a) { return Cx(s) / a; }
    friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

template <typename R> inline Cx<R> conj(const Cx<R>& z) { return Cx<R>(z.re, -z.im); }
template <typename R> inline R norm(const Cx<R>& z) { return z.re * z.re + z.im * z.im; }

template <typename R>
inline R abs(const Cx<R>& z) {
    R ar = abs(z.re), ai = abs(z.im);
    if (ar == R(0)) return ai;
    if (ai == R(0)) return ar;
    if (ar >= ai) {
        R q = ai / ar;
        return ar * sqrt(R(1) + q * q);
    }
    R q = ar / ai;
    return ai * sqrt(R(1) + q * q);
}

template <typename R> inline R arg(const Cx<R>& z) { return atan2(z.im, z.re); }

template <typename R>
inline Cx<R> sqrt(const Cx<R>& z) {
    if (z.re == R(0) && z.im == R(0)) return Cx<R>(R(0), R(0));
    R m = abs(z);
    R t = sqrt((m + abs(z.re)) / R(2));
    if (z.re >= R(0))
        return Cx<R>(t, z.im / (R(2) * t));
    R s = z.im >= R(0) ? R(1) : R(-1);
    return Cx<R>(abs(z.im) / (R(2) * t), s * t);
}

template <typename R>
inline Cx<R> exp(const Cx<R>& z) {
    R m = exp(z.re);
    return Cx<R>(m * cos(z.im), m * sin(z.im));
}

template <typename R>
inline Cx<R> log(const Cx<R>& z) {
    return Cx<R>(log(abs(z)), arg(z));
}

template <typename R>
inline Cx<R> polar_cx(const R& r, const R& theta) {
    return Cx<R>(r * cos(theta), r * sin(theta));
}

// z^k for integer k (small |k|; used for quadrature phases).
template <typename R>
inline Cx<R> ipow(Cx<R> z, long k) {
    if (k < 0) return R(1) / ipow(z, -k);
    Cx<R> out(R(1));
    while (k) {
        if (k & 1) out *= z;
        z *= z;
        k >>= 1;
    }
    return out;
}

using cxd = Cx<double>;

template <typename R>
inline double to_double(const R& x) { return static_cast<double>(x); }

template <typename R>
inline cxd to_cxd(const Cx<R>& z) { return cxd(to_double(z.re), to_double(z.im)); }

template <typename R>
inline Cx<R> cx_of(const cxd& z) { return Cx<R>(R(z.re), R(z.im)); }

// Stable sup/max helpers for templated code.
template <typename R> inline R rmax(const R& a, const R& b) { return a < b ? b : a; }
template <typename R> inline R rmin(const R& a, const R& b) { return a < b ? a : b; }

// FNV-1a content hash, used for cache keys.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace merolab
