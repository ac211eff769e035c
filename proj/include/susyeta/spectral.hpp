#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susyeta/operators.hpp"

namespace susyeta {

enum class StateKind { eta0_bar, eta_bar, eta, h0, H };
enum class Normalization { delta_normalized, box, raw };

std::string to_string(StateKind k);
StateKind state_kind_from_string(const std::string& s);

// A continuum eigenfunction sampled on the grid.  ψ' is carried alongside ψ,
// which lets the Darboux maps use ψ'' = (V − λ)ψ instead of differentiating
// samples.
struct ScatteringState {
    std::string op_name;
    double k = 0.0;
    cplx eigenvalue = 0.0;
    GridFunction values;
    GridFunction derivs;
    Normalization normalization = Normalization::raw;
    std::optional<Fn> analytic;  // closed form when one exists
};

// Closed forms of the constant entry, A = √(2/π):
//   eta0_bar  A sin kx                                λ = k² + d²
//   eta_bar   A (k² + d²)^{−1/2} (d sin kx − k cos kx)  λ = k² + d²
//   eta       e^{−ibx} × eta_bar                      λ = k² + d²
//   h0        A sin kx                                λ = k²
//   H         A (k² − α)^{−1/2} (s sin kx − k cos kx)   λ = k², s = d + ib
// Throws WrongEntry for any other entry.
ScatteringState analytic_states_constant(StateKind kind, double k, const TransformationFunction& u,
                                         const HalfLineGrid& grid);

// λ^{−1/2} L_ρ ψ₀ with L_ρ = −D + W.  Throws ZeroMode when λ = 0.
ScatteringState darboux_map_forward(const ScatteringState& state0, const TransformationFunction& u);
// λ^{−1/2} L_ρ† ψ with L_ρ† = D + W.
ScatteringState darboux_map_backward(const ScatteringState& state, const TransformationFunction& u);
// e^{−iω} ψ
ScatteringState phase_map(const ScatteringState& state, const Fn& omega);

// Integrates −ψ'' + Vψ = λψ inward from X with dopri5 for the two tail
// solutions sin(kx), cos(kx), then combines them to meet the boundary row at 0.
// The result has tail amplitude √(2/π); the overall sign puts the phase shift
// in (−π, 0].  Real operators only (no drift, real potential and robin
// coefficient).  Throws NoDecay when V is not flat over the last 10% of the
// grid, MatchFailure when both tail solutions meet the boundary row.
ScatteringState solve_scattering(const SchrodingerOperator& op, double k, const HalfLineGrid& grid);

// max over interior nodes of |(op − λ)ψ| / max|ψ|.  Uses the closed form when
// the state has one, otherwise ψ'' from 4th-order differences and the stored ψ'.
double eigen_residual(const SchrodingerOperator& op, const ScatteringState& state);
// |ψ'(0) + cψ(0)| or |ψ(0)|, relative to max|ψ|
double state_boundary_residual(const BoundaryCondition& bc, const ScatteringState& state);

// Wave packets P_i = ∫ g_i(k) ψ_k dk with Gaussian g_i of the given width.
// For δ-normalized ψ_k on the half-line, ⟨P_i|P_j⟩ = ∫ g_i g_j dk.
struct PacketGram {
    Eigen::MatrixXcd gram;
    Eigen::MatrixXd reference;
};
PacketGram packet_gram(const std::function<ScatteringState(double)>& state_at,
                       const std::vector<double>& centers, double width, const HalfLineGrid& grid,
                       std::size_t nodes_per_packet = 121);

// ‖1/ρ‖ on [0, X]; grows without bound when 1/ρ is not square integrable
double inverse_rho_norm(const TransformationFunction& u, double x_max, std::size_t n);

}  // namespace susyeta
