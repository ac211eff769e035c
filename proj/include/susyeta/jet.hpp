#pragma once

// Truncated Taylor arithmetic.  Every analytic object in the library (ρ, ω, w,
// test functions, operator images) is a callable x -> Jet, so derivatives of
// compositions come out exactly instead of through finite differences.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>

namespace susyeta {

using cplx = std::complex<double>;

class Jet {
public:
    // Coefficients c[k] = f^(k)(x0)/k!.  Each derivative() drops the top order,
    // so an operator of order m consumes m orders.  η(Hψ) needs ψ'''' and
    // (log ρ)'''''; twelve leaves headroom for one more composition.
    static constexpr std::size_t N = 12;

    Jet() { c_.fill(cplx(0.0)); }
    Jet(cplx v) { c_.fill(cplx(0.0)); c_[0] = v; }  // NOLINT: constants promote
    Jet(double v) : Jet(cplx(v)) {}                 // NOLINT

    static Jet variable(double x0) {
        Jet j(x0);
        j.c_[1] = 1.0;
        return j;
    }

    cplx& operator[](std::size_t k) { return c_[k]; }
    const cplx& operator[](std::size_t k) const { return c_[k]; }

    cplx value() const { return c_[0]; }
    // m-th derivative at the expansion point
    cplx deriv(std::size_t m) const {
        double f = 1.0;
        for (std::size_t k = 2; k <= m; ++k) f *= double(k);
        return c_[m] * f;
    }

    Jet derivative() const {
        Jet r;
        for (std::size_t k = 0; k + 1 < N; ++k) r.c_[k] = c_[k + 1] * double(k + 1);
        return r;
    }

    Jet conj() const {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) r.c_[k] = std::conj(c_[k]);
        return r;
    }
    Jet real() const {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) r.c_[k] = c_[k].real();
        return r;
    }
    Jet imag() const {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) r.c_[k] = c_[k].imag();
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < N; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < N; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(cplx s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    Jet operator-() const {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) r.c_[k] = -c_[k];
        return r;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator*(cplx s, Jet a) { return a *= s; }
    friend Jet operator*(Jet a, double s) { return a *= cplx(s); }
    friend Jet operator*(double s, Jet a) { return a *= cplx(s); }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) {
            cplx s = 0.0;
            for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k < N; ++k) {
            cplx s = a.c_[k];
            for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

private:
    std::array<cplx, N> c_;
};

Jet exp(const Jet& f);
Jet log(const Jet& f);  // principal branch at the expansion point
Jet log1p(const Jet& eps);  // log(1 + eps), accurate when eps is tiny
Jet sqrt(const Jet& f);
Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet sinh(const Jet& f);
Jet cosh(const Jet& f);
Jet tanh(const Jet& f);

// An analytic function of the real coordinate, returning its jet at x.
using Fn = std::function<Jet(double)>;

Fn constant_fn(cplx v);
Fn add(Fn a, Fn b);
Fn sub(Fn a, Fn b);
Fn mul(Fn a, Fn b);
Fn scale(cplx s, Fn a);
Fn conj(Fn a);
Fn derivative(Fn a);

}  // namespace susyeta
