#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "susyeta/metric_linalg.hpp"
#include "susyeta/spectral.hpp"

namespace susyeta {

struct CheckContext {
    std::string entry;
    double d = 0.0, b = 0.0, a = 0.0, c = 0.0;
    std::size_t n = 0;
    double x_max = 0.0;
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;            // residual <= tolerance
    bool negative_control = false;  // the suite wants this one to fail
    CheckContext context;
};

// A check counts toward the verdict when it passes, or when it is a negative
// control and fails.
bool outcome_ok(const CheckResult& r);
bool suite_ok(const std::vector<CheckResult>& results);

// Per-check tolerances, keyed by check name.  Overrides from a config file
// replace entries by name.
using ToleranceTable = std::map<std::string, double>;
const ToleranceTable& default_tolerances();
// one-line note on the dominant error source of each tolerance
const std::map<std::string, std::string>& tolerance_sources();

// L² norm of a callable on [0, X] by 20-point Gauss-Legendre panels of
// unit width.  Used by every analytic check so that quadrature error stays
// near rounding and away from the grid.
double panel_norm(const std::function<cplx(double)>& f, double x_max);
cplx panel_inner(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g, double x_max);

// max over tests of ‖η(Hψ) − H†(ηψ)‖/‖ψ‖
double check_quasi_hermiticity(const Superpotential& w, cplx alpha, const std::vector<Fn>& tests, double x_max);
// max over consecutive pairs of |⟨ψ₂|ηψ₁⟩ − ⟨ηψ₂|ψ₁⟩|/(‖ψ₁‖‖ψ₂‖)
double check_eta_selfadjoint(const Superpotential& w, const std::vector<Fn>& tests, double x_max);
// max of ‖L*h₀ψ − HL*ψ‖/‖ψ‖ over dirichlet tests and ‖h₀L†φ − L†Hφ‖/‖φ‖
// over robin tests.  The adjoint form is the conjugate-then-adjoint of the
// first; its ladder is D + w, the one that maps H states to h₀ states.
double check_interh0H(const TransformationFunction& u, const HalfLineGrid& grid, const std::vector<Fn>& h0_tests,
                      const std::vector<Fn>& H_tests);
// max over nodes of |−u'' + v₀u − αu| / max|u|, with v₀ the real part of
// u''/u + α_built.  alpha_test is the eigenvalue being checked.
double check_h0_eigen_u(const TransformationFunction& u, cplx alpha_test, const HalfLineGrid& grid);
// max of ‖η₀L†ψ − L†ηψ‖/‖ψ‖ and ‖Lη₀φ − ηLφ‖/‖φ‖
double check_eta_intertwinings(const Superpotential& w, const std::vector<Fn>& robin_tests,
                               const std::vector<Fn>& dirichlet_tests, double x_max);

struct SuiteOptions {
    std::uint64_t seed = 20240917;
    std::size_t n_tests = 20;
    ToleranceTable tolerances = default_tolerances();
    bool spectral = true;
    bool metric = true;
};

// Every identity check with its negative controls, then the operator,
// spectral and metric invariants.  Deterministic for a fixed seed.
std::vector<CheckResult> run_suite(const std::string& entry, const CatalogueParams& params, const HalfLineGrid& grid,
                                   const SuiteOptions& options = {});

}  // namespace susyeta
