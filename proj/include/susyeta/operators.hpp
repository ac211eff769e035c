#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "susyeta/transformation.hpp"

namespace susyeta {

enum class Flavor { L, L_dagger, L_star, L_star_dagger };

// sign·d/dx + coefficient
struct LadderOperator {
    Flavor flavor = Flavor::L;
    int sign = -1;
    Fn coefficient;
};

// L = −D + w*, L† = D + w, L* = −D + w, (L*)† = D + w*
LadderOperator make_ladder(Flavor flavor, const Superpotential& w);
// L_ρ = −D + W and L_ρ† = D + W, the real ladder pair of η̄
LadderOperator make_real_ladder(bool dagger, const Superpotential& w);

Fn apply_ladder(const LadderOperator& op, const Fn& psi);

struct BoundaryCondition {
    enum class Kind { robin, dirichlet };
    Kind kind = Kind::dirichlet;
    cplx c = 0.0;  // robin: φ'(0) + c φ(0) = 0

    static BoundaryCondition robin(cplx c) { return {Kind::robin, c}; }
    static BoundaryCondition dirichlet() { return {Kind::dirichlet, 0.0}; }
};

// −ψ'' + drift ψ' + (potential + constant_shift) ψ
struct SchrodingerOperator {
    std::string name;
    Fn potential;
    Fn drift;
    cplx constant_shift = 0.0;
    BoundaryCondition boundary;
    bool hermitian = false;
};

Fn apply(const SchrodingerOperator& op, const Fn& psi);
// |ψ'(0) + cψ(0)| or |ψ(0)|
double boundary_residual(const BoundaryCondition& bc, const Fn& psi);

SchrodingerOperator build_eta(const Superpotential& w);
// η₀ = L†L, dirichlet.  (D + w)(−ψ' + w*ψ) = −ψ'' + (w* − w)ψ' + (|w|² + w*')ψ,
// so the drift is the same w* − w as in η; only the potential differs.
SchrodingerOperator build_eta0(const Superpotential& w);
SchrodingerOperator build_H(const Superpotential& w, cplx alpha);
// H† = L(L*)† + α*: conjugate potential, shift and boundary coefficient
SchrodingerOperator build_H_dagger(const SchrodingerOperator& H);
// h₀ = L†L* + α = −D² + u''/u + α.  Throws NotReal when the imaginary part
// of the potential exceeds tol at any node (ω inconsistent with γ).
SchrodingerOperator build_h0(const TransformationFunction& u, const HalfLineGrid& grid,
                             double tol = 1e-8);
// η̄ = −D² + W² − W', robin W(0)
SchrodingerOperator build_eta_bar(const TransformationFunction& u, const HalfLineGrid& grid);
// η̄₀ = −D² + ρ''/ρ, dirichlet
SchrodingerOperator build_eta0_bar(const TransformationFunction& u, const HalfLineGrid& grid);
// V̄ − d², formed from W − d so that it keeps relative precision in the tail
Fn eta_bar_potential_excess(const TransformationFunction& u);

// Test functions x e^{−(x−μ)²/σ²} with complex amplitude, μ ∈ [2, X/2],
// σ ∈ [0.5, 2], patched near 0 to satisfy bc and to have nonzero boundary data.
std::vector<Fn> make_test_functions(std::size_t count, std::uint64_t seed, double x_max,
                                    const BoundaryCondition& bc);
// ψ + ε e^{−x²}: violates a robin or dirichlet condition at 0 by ~ε
Fn perturb_at_origin(const Fn& psi, cplx eps);

// Deterministic uniform doubles in [0,1) from mt19937_64, independent of the
// standard library's distribution implementations.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed);
    double next();
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

}  // namespace susyeta
