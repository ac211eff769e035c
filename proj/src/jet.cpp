#include "susyeta/jet.hpp"

#include <cmath>

namespace susyeta {

namespace {
constexpr std::size_t N = Jet::N;
}

Jet exp(const Jet& f) {
    Jet e;
    e[0] = std::exp(f[0]);
    for (std::size_t k = 1; k < N; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += double(j) * f[j] * e[k - j];
        e[k] = s / double(k);
    }
    return e;
}

Jet log(const Jet& f) {
    Jet l;
    l[0] = std::log(f[0]);
    for (std::size_t k = 1; k < N; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j < k; ++j) s += double(j) * l[j] * f[k - j];
        l[k] = (f[k] - s / double(k)) / f[0];
    }
    return l;
}

Jet log1p(const Jet& eps) {
    const cplx e = eps[0];
    const double re = e.real(), im = e.imag();
    Jet l;
    l[0] = cplx(0.5 * std::log1p(2.0 * re + re * re + im * im), std::atan2(im, 1.0 + re));
    const cplx f0 = 1.0 + e;
    for (std::size_t k = 1; k < N; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j < k; ++j) s += double(j) * l[j] * eps[k - j];
        l[k] = (eps[k] - s / double(k)) / f0;
    }
    return l;
}

Jet sqrt(const Jet& f) {
    Jet r;
    r[0] = std::sqrt(f[0]);
    for (std::size_t k = 1; k < N; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j < k; ++j) s += r[j] * r[k - j];
        r[k] = (f[k] - s) / (2.0 * r[0]);
    }
    return r;
}

namespace {
// s' = f' c, c' = sign f' s  (sign -1: sin/cos, +1: sinh/cosh)
void sincos_pair(const Jet& f, double sign, Jet& s, Jet& c, bool hyperbolic) {
    s[0] = hyperbolic ? std::sinh(f[0]) : std::sin(f[0]);
    c[0] = hyperbolic ? std::cosh(f[0]) : std::cos(f[0]);
    for (std::size_t k = 1; k < N; ++k) {
        cplx ss = 0.0, cc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            ss += double(j) * f[j] * c[k - j];
            cc += double(j) * f[j] * s[k - j];
        }
        s[k] = ss / double(k);
        c[k] = sign * cc / double(k);
    }
}
}  // namespace

Jet sin(const Jet& f) {
    Jet s, c;
    sincos_pair(f, -1.0, s, c, false);
    return s;
}
Jet cos(const Jet& f) {
    Jet s, c;
    sincos_pair(f, -1.0, s, c, false);
    return c;
}
Jet sinh(const Jet& f) {
    Jet s, c;
    sincos_pair(f, 1.0, s, c, true);
    return s;
}
Jet cosh(const Jet& f) {
    Jet s, c;
    sincos_pair(f, 1.0, s, c, true);
    return c;
}

// t' = f' (1 - t²); avoids cosh overflow for large arguments
Jet tanh(const Jet& f) {
    Jet t, q;  // q = 1 - t²
    t[0] = std::tanh(f[0]);
    q[0] = 1.0 - t[0] * t[0];
    for (std::size_t k = 1; k < N; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += double(j) * f[j] * q[k - j];
        t[k] = s / double(k);
        cplx sq = 0.0;
        for (std::size_t j = 0; j <= k; ++j) sq += t[j] * t[k - j];
        q[k] = -sq;
    }
    return t;
}

Fn constant_fn(cplx v) {
    return [v](double) { return Jet(v); };
}
Fn add(Fn a, Fn b) {
    return [a = std::move(a), b = std::move(b)](double x) { return a(x) + b(x); };
}
Fn sub(Fn a, Fn b) {
    return [a = std::move(a), b = std::move(b)](double x) { return a(x) - b(x); };
}
Fn mul(Fn a, Fn b) {
    return [a = std::move(a), b = std::move(b)](double x) { return a(x) * b(x); };
}
Fn scale(cplx s, Fn a) {
    return [s, a = std::move(a)](double x) { return s * a(x); };
}
Fn conj(Fn a) {
    return [a = std::move(a)](double x) { return a(x).conj(); };
}
Fn derivative(Fn a) {
    return [a = std::move(a)](double x) { return a(x).derivative(); };
}

}  // namespace susyeta
