#include "susyeta/operators.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "susyeta/errors.hpp"

namespace susyeta {

LadderOperator make_ladder(Flavor flavor, const Superpotential& w) {
    switch (flavor) {
        case Flavor::L: return {flavor, -1, conj(w.w)};
        case Flavor::L_dagger: return {flavor, +1, w.w};
        case Flavor::L_star: return {flavor, -1, w.w};
        case Flavor::L_star_dagger: return {flavor, +1, conj(w.w)};
    }
    throw InvalidParams("unknown ladder flavor");
}

LadderOperator make_real_ladder(bool dagger, const Superpotential& w) {
    return {dagger ? Flavor::L_dagger : Flavor::L, dagger ? +1 : -1, w.W};
}

Fn apply_ladder(const LadderOperator& op, const Fn& psi) {
    return [sign = double(op.sign), f = op.coefficient, psi](double x) {
        const Jet p = psi(x);
        return sign * p.derivative() + f(x) * p;
    };
}

Fn apply(const SchrodingerOperator& op, const Fn& psi) {
    return [op, psi](double x) {
        const Jet p = psi(x);
        const Jet d1 = p.derivative();
        const Jet d2 = d1.derivative();
        return -d2 + op.drift(x) * d1 + (op.potential(x) + op.constant_shift) * p;
    };
}

double boundary_residual(const BoundaryCondition& bc, const Fn& psi) {
    const Jet p = psi(0.0);
    if (bc.kind == BoundaryCondition::Kind::dirichlet) return std::abs(p.value());
    return std::abs(p.deriv(1) + bc.c * p.value());
}

SchrodingerOperator build_eta(const Superpotential& w) {
    SchrodingerOperator op;
    op.name = "eta";
    op.drift = [f = w.w](double x) {
        const Jet v = f(x);
        return v.conj() - v;
    };
    op.potential = [f = w.w](double x) {
        const Jet v = f(x);
        return v.conj() * v - v.derivative();
    };
    op.boundary = BoundaryCondition::robin(w.w(0.0).value());
    // self-adjoint on its domain, but the coefficient-level flag needs zero drift
    op.hermitian = false;
    return op;
}

SchrodingerOperator build_eta0(const Superpotential& w) {
    SchrodingerOperator op;
    op.name = "eta0";
    op.drift = [f = w.w](double x) {
        const Jet v = f(x);
        return v.conj() - v;
    };
    op.potential = [f = w.w](double x) {
        const Jet v = f(x);
        return v.conj() * v + v.conj().derivative();
    };
    op.boundary = BoundaryCondition::dirichlet();
    op.hermitian = false;
    return op;
}

SchrodingerOperator build_H(const Superpotential& w, cplx alpha) {
    SchrodingerOperator op;
    op.name = "H";
    op.drift = constant_fn(0.0);
    op.potential = [f = w.w, alpha](double x) {
        const Jet v = f(x);
        return v * v - v.derivative() + alpha;
    };
    op.boundary = BoundaryCondition::robin(w.w(0.0).value());
    op.hermitian = false;
    return op;
}

SchrodingerOperator build_H_dagger(const SchrodingerOperator& H) {
    SchrodingerOperator op = H;
    op.name = H.name + "_dagger";
    op.potential = conj(H.potential);
    op.drift = conj(H.drift);
    op.constant_shift = std::conj(H.constant_shift);
    op.boundary.c = std::conj(H.boundary.c);
    return op;
}

SchrodingerOperator build_h0(const TransformationFunction& u, const HalfLineGrid& grid, double tol) {
    const Superpotential w = superpotential_from_u(u, grid);
    const cplx alpha = u.params.alpha;
    Fn full = [f = w.w, alpha](double x) {
        const Jet v = f(x);
        return v.derivative() + v * v + alpha;  // u''/u + α
    };
    double worst = 0.0, where = 0.0;
    for (double x : grid.nodes()) {
        const double im = std::abs(full(x).value().imag());
        if (im > worst) {
            worst = im;
            where = x;
        }
    }
    if (worst > tol) {
        std::ostringstream os;
        os << "Im v0 reaches " << worst << " at x = " << where
           << "; omega does not solve its equation for gamma = " << u.params.gamma;
        throw NotReal(os.str());
    }
    SchrodingerOperator op;
    op.name = "h0";
    op.drift = constant_fn(0.0);
    op.potential = [full](double x) { return full(x).real(); };
    op.boundary = BoundaryCondition::dirichlet();
    op.hermitian = true;
    return op;
}

SchrodingerOperator build_eta_bar(const TransformationFunction& u, const HalfLineGrid& grid) {
    const Superpotential w = superpotential_from_u(u, grid);
    SchrodingerOperator op;
    op.name = "eta_bar";
    op.drift = constant_fn(0.0);
    op.potential = [W = w.W](double x) {
        const Jet v = W(x);
        return v * v - v.derivative();
    };
    op.boundary = BoundaryCondition::robin(w.W(0.0).value());
    op.hermitian = true;
    return op;
}

SchrodingerOperator build_eta0_bar(const TransformationFunction& u, const HalfLineGrid& grid) {
    const Superpotential w = superpotential_from_u(u, grid);
    SchrodingerOperator op;
    op.name = "eta0_bar";
    op.drift = constant_fn(0.0);
    op.potential = [W = w.W](double x) {
        const Jet v = W(x);
        return v * v + v.derivative();
    };
    op.boundary = BoundaryCondition::dirichlet();
    op.hermitian = true;
    return op;
}

Fn eta_bar_potential_excess(const TransformationFunction& u) {
    if (u.vbar_excess) return u.vbar_excess;
    const double d = u.params.d;
    return [u, d](double x) {
        const Jet e = u.log_rho_excess(x).derivative().real();  // W − d
        return e * (e + 2.0 * d) - e.derivative();
    };
}

struct SeededUniform::Impl {
    std::mt19937_64 engine;
};

SeededUniform::SeededUniform(std::uint64_t seed) : impl_(std::make_shared<Impl>()) {
    impl_->engine.seed(seed);
}

double SeededUniform::next() { return double(impl_->engine() >> 11) * 0x1.0p-53; }

std::vector<Fn> make_test_functions(std::size_t count, std::uint64_t seed, double x_max,
                                    const BoundaryCondition& bc) {
    SeededUniform rng(seed);
    std::vector<Fn> out;
    out.reserve(count);
    const double mu_hi = std::max(2.0, x_max / 2.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double mu = rng.uniform(2.0, mu_hi);
        const double sigma = rng.uniform(0.5, 2.0);
        const cplx z(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const cplx g0(rng.uniform(-1, 1), rng.uniform(-1, 1));
        // A = z x e^{−(x−μ)²/σ²}: A(0) = 0, A'(0) = z e^{−μ²/σ²}
        auto A = [=](const Jet& X) {
            const Jet t = (X - mu) * (1.0 / sigma);
            return z * X * exp(-(t * t));
        };
        const cplx dA0 = z * std::exp(-mu * mu / (sigma * sigma));
        if (bc.kind == BoundaryCondition::Kind::dirichlet) {
            out.push_back([=](double x) {
                const Jet X = Jet::variable(x);
                return A(X) + g0 * X * exp(-(X * X));
            });
        } else {
            // e^{−x²}(1 − cx) satisfies the robin row; x e^{−x²} cancels A'(0).
            const cplx c = bc.c;
            out.push_back([=](double x) {
                const Jet X = Jet::variable(x);
                const Jet gauss = exp(-(X * X));
                return A(X) + g0 * gauss * (1.0 - c * X) - dA0 * X * gauss;
            });
        }
    }
    return out;
}

Fn perturb_at_origin(const Fn& psi, cplx eps) {
    return [psi, eps](double x) {
        const Jet X = Jet::variable(x);
        return psi(x) + eps * exp(-(X * X));
    };
}

}  // namespace susyeta
