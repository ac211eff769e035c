#pragma once

#include <string>

#include "susyeta/halfline_grid.hpp"
#include "susyeta/jet.hpp"

namespace susyeta {

// Tail constants of u ~ e^{(d+ib)x}: α = −(d+ib)² = β + iγ.
struct AsymptoticParams {
    double d = 0.0;
    double b = 0.0;
    cplx alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    // Requires d < 0 (broken supersymmetry).
    static AsymptoticParams make(double d, double b);
    // No sign guard.  Only the singularity probe uses this, to reach d = 0.
    static AsymptoticParams unchecked(double d, double b);

    cplx s() const { return {d, b}; }
};

// u = ρ e^{iω}.  ρ and ω are stored through their departures from the tail
// law, log ρ = d·x + log_rho_excess and ω = b·x + omega_excess, so quantities
// that decay at large x never come out of a cancellation.
struct TransformationFunction {
    std::string name;
    AsymptoticParams params;
    Fn log_rho_excess;
    Fn omega_excess;
    // Optional log_rho_excess + i·omega_excess in one call, for entries where
    // both come out of the same expression.  Whoever replaces either part
    // must clear it.
    Fn log_u_excess;
    // Optional V̄ − d² for entries where W² − W' − d² cancels at leading
    // order.  Depends on ρ only; whoever replaces log_rho_excess must clear it.
    Fn vbar_excess;

    Jet log_rho(double x) const;
    Jet omega(double x) const;
    Jet rho(double x) const { return exp(log_rho(x)); }
    Jet log_u(double x) const;
    Jet u(double x) const { return exp(log_u(x)); }

    Fn log_rho_fn() const;
    Fn omega_fn() const;
    Fn rho_fn() const;
    Fn u_fn() const;
};

struct Superpotential {
    Fn w;        // u'/u = W + iω'
    Fn W;        // ρ'/ρ
    Fn W_minus_d;  // W − d without cancellation
};

// Throws PoleDetected if ρ is zero or not finite at a node.
Superpotential superpotential_from_u(const TransformationFunction& u, const HalfLineGrid& grid);

struct TailReport {
    double rho_drift;       // spread of log(ρ e^{−dx}) over the last 10% of nodes
    double omega_mismatch;  // |ω'(X) − b|
};
TailReport check_tail(const TransformationFunction& u, const HalfLineGrid& grid);

struct PhaseSolution {
    Fn omega;                       // jets of ω, higher orders from the ODE
    Eigen::VectorXd omega_nodes;    // ω at the grid nodes
    Eigen::VectorXd omega_prime_nodes;
    double tail_mismatch = 0.0;     // |ω'(X) − b|
};

// Solves ω'' + 2(ρ'/ρ)ω' + γ = 0 with ω'(∞) = b = −γ/(2d), ω(0) = 0, through
// the first integral ρ²(x)ω'(x) = γ∫_x^∞ ρ².  The part of the integral beyond
// X uses ρ ≈ ρ(X)e^{W(X)(t−X)}.  Throws TailMismatch when |ω'(X) − b| >
// tail_tol.
PhaseSolution solve_phase(const Fn& log_rho, const AsymptoticParams& params,
                          const HalfLineGrid& grid, double tail_tol = 1e-6);

// max over interior nodes of |ω'' + 2Wω' + γ|, ω'' taken by a 5-point
// difference of the ω' callable (independent of the ODE-based jets).
double phase_ode_residual(const Fn& omega, const Fn& log_rho, double gamma,
                          const HalfLineGrid& grid);

struct ScatteringDiagnostic {
    double integral = 0.0;   // ∫_0^X (1+x)|V| dx
    double tail_rate = 0.0;  // slope of log|V| over the last 10% of nodes
    bool decays = false;
    bool scattering = false;
};
ScatteringDiagnostic check_scattering_condition(const std::function<cplx(double)>& V,
                                                const HalfLineGrid& grid);

struct CatalogueParams {
    double d = -1.0;
    double b = 0.0;
    double a = 1.0;
    double c = 1.0;
};

// "constant": u = e^{(d+ib)x}.
// "poschl_teller": u = e^{(d+ib)x}(a tanh(ax+c) − d − ib)/(a − d − ib).
TransformationFunction catalogue(const std::string& name, const CatalogueParams& p);

// Accepts "poschl-teller" as an alias.
std::string canonical_entry_name(const std::string& name);

}  // namespace susyeta
