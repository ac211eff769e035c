#pragma once

#include <string>
#include <vector>

#include "susyeta/operators.hpp"

namespace susyeta {

// Matrices live on a staggered pair of spaces: U holds samples at the grid
// nodes (trapezoid weights, h/2 at both ends), F holds samples at the n−1
// midpoints (weight h).  Entries are stored in the weighted basis
// v̂ = W^{1/2} v, so the discrete inner product is the Euclidean one and the
// adjoint is the conjugate transpose.
enum class Space { nodes, midpoints };

struct OperatorMatrix {
    Eigen::MatrixXcd entries;
    HalfLineGrid grid;
    Space domain = Space::nodes;
    Space codomain = Space::nodes;
    BoundaryCondition boundary;
    bool hermitian_hint = false;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
    // applies the matrix to plain samples and returns plain samples
    Eigen::VectorXcd apply_to_samples(const Eigen::VectorXcd& samples) const;
};

Eigen::VectorXd space_weights(const HalfLineGrid& grid, Space s);
Eigen::VectorXd space_points(const HalfLineGrid& grid, Space s);
// plain samples of f on the given space
Eigen::VectorXcd sample_on(const Fn& f, const HalfLineGrid& grid, Space s);
// v ↦ W^{1/2} v and back
Eigen::VectorXcd to_weighted(const HalfLineGrid& grid, Space s, const Eigen::VectorXcd& v);
Eigen::VectorXcd from_weighted(const HalfLineGrid& grid, Space s, const Eigen::VectorXcd& v);

// ‖M − M†‖_F / ‖M‖_F
double hermiticity_residual(const Eigen::MatrixXcd& m);
// M* = W_dom^{−1} M† W_cod in plain samples, i.e. the conjugate transpose here
OperatorMatrix weighted_adjoint(const OperatorMatrix& m);

// Sign +1 flavors (L†, (L*)†) map U → F through 4-point staggered stencils,
// D_s + diag(f_mid) I_s.  Sign −1 flavors (L, L*) are the weighted adjoints of
// their partner with conjugated coefficient, F → U, so L and L† are exactly
// mutually adjoint.  Neither end carries a boundary row: the domain
// constraint of each operator enters as the natural condition of the
// factorized forms below.
OperatorMatrix discretize_ladder(const LadderOperator& op, const HalfLineGrid& grid);

// η = L L† = B̂†B̂ on U with B̂ the weighted L†.  B̂ has n−1 rows, so η has an
// exact one-dimensional kernel: the discrete 1/u, which is not square
// integrable in the continuum.  Throws KernelDetected when a second
// eigenvalue falls below 1e−10·λ_max.
OperatorMatrix assemble_eta_matrix(const Superpotential& w, const HalfLineGrid& grid);
// η₀ = L†L = B̂B̂† on F, positive definite
OperatorMatrix assemble_eta0_matrix(const Superpotential& w, const HalfLineGrid& grid);
// H = L*L† + α = B̂ᵀB̂ + α on U
OperatorMatrix assemble_H_matrix(const Superpotential& w, cplx alpha, const HalfLineGrid& grid);
// H from its coefficients, −D² + w² − w' + α with the robin row folded into
// the weak form.  Cross-check only.
OperatorMatrix assemble_H_matrix_coefficient(const Superpotential& w, cplx alpha, const HalfLineGrid& grid);
// h₀ = L†L* + α = B̂B̂ᵀ + α on F
OperatorMatrix assemble_h0_matrix(const Superpotential& w, cplx alpha, const HalfLineGrid& grid);

struct MetricSqrt {
    Eigen::MatrixXcd rho_matrix;
    Eigen::MatrixXcd rho_inverse;    // inverse on the retained subspace
    double eigen_floor = 0.0;        // smallest retained eigenvalue of η
    double condition_number = 0.0;   // λ_max/λ_min of ρ
    Eigen::MatrixXcd basis;          // retained eigenvectors
    Eigen::VectorXd eigenvalues;     // retained eigenvalues of η, ascending
    std::size_t deflated = 0;
};
// ρ = QΛ^{1/2}Q† over all but the `deflate` smallest eigenpairs.  Throws
// NotPositiveDefinite if a retained eigenvalue is not positive.
MetricSqrt hermitian_sqrt(const Eigen::MatrixXcd& eta, std::size_t deflate = 0);
// deflates the box mode of an assembled η
MetricSqrt hermitian_sqrt(const OperatorMatrix& eta);

struct EquivalentH {
    OperatorMatrix h;
    double r_h = 0.0;              // ‖h − h†‖/‖h‖
    double second_equality = 0.0;  // ‖ρHρ⁻¹ − ρ⁻¹H†ρ‖/‖h‖
};
EquivalentH equivalent_h(const MetricSqrt& rho, const OperatorMatrix& H);

// r_h restricted to the η-eigenvectors with eigenvalue ≤ lambda_cut, the
// modes the grid resolves
double windowed_hermiticity(const OperatorMatrix& h, const MetricSqrt& rho, double lambda_cut);

struct Isometry {
    OperatorMatrix U;
    double defect = 0.0;  // ‖U†U − I‖_F / ‖I‖_F
};
// U = L η₀^{−1/2}.  Throws NotPositiveDefinite when η₀ is not.
Isometry isometry_U(const OperatorMatrix& eta0, const OperatorMatrix& L);

// ρL*h₀(h₀−α)^{−1}(h₀−α*)^{−1}(L*)†ρ, which for real α is the l'Hospital
// form ρL*h₀(h₀−α)^{−2}(L*)†ρ.  Throws AlphaOnSpectrum when α is real and
// inside the real range of the discrete h₀ spectrum.
struct ResolventH {
    OperatorMatrix h;
    bool lhospital = false;
    double solve_condition = 0.0;  // 1-norm condition estimate of h₀ − α
};
ResolventH h_via_resolvent(const MetricSqrt& rho, const OperatorMatrix& L_star, const OperatorMatrix& h0,
                           cplx alpha);

// ‖A − B‖_F / ‖B‖_F
double relative_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Everything the metric pipeline produces for one constant-type seed.
struct MetricPipeline {
    OperatorMatrix eta, H, h0, L_star;
    MetricSqrt rho;
    EquivalentH similarity;
    double resolvent_error = 0.0;
    bool lhospital = false;
};
MetricPipeline run_metric_pipeline(const TransformationFunction& u, const HalfLineGrid& grid);

struct ProbeRow {
    double d = 0.0;
    double cond_rho = 0.0;
    double r_h = 0.0;
    double resolvent_error = 0.0;
    double r_h_resolved = 0.0;  // windowed r_h over k ≤ 2
    bool near_singular = false;
};
struct ProbeReport {
    double b = 0.0;
    std::vector<ProbeRow> rows;
    bool cond_monotone = false;        // strictly increasing toward d → 0⁻
    bool r_h_monotone = false;
    bool resolvent_monotone = false;   // nondecreasing
};
// Constant entry with u = e^{(d+ib)x}.  A row is near-singular when the gap
// d² below the continuum is not resolved by the box, d² < (π/X)², or when
// cond(ρ) > 1e6.
ProbeReport spectral_singularity_probe(double b, const std::vector<double>& d_sequence, double x_max,
                                       std::size_t n);

}  // namespace susyeta
