// One line per acceptance criterion.  Thresholds are fixed up front;
// nothing here is tuned to make a line pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "susyeta/errors.hpp"
#include "susyeta/metric_linalg.hpp"
#include "susyeta/spectral.hpp"
#include "susyeta/verify.hpp"

using namespace susyeta;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < budget_s;
    const bool ok = o.pass && in_time;
    failures += ok ? 0 : 1;
    std::printf("[%s] %d %-34s %s; %.2f s of %.0f s%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt,
                budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char b[96];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

Outcome constant_example() {
    const double d = -1.0, b = 0.5;
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("constant", {d, b, 1.0, 1.0});
    const auto w = superpotential_from_u(u, g);
    const auto eta = build_eta(w);
    const auto H = build_H(w, u.params.alpha);
    const auto h0 = build_h0(u, g);
    double coef = 0.0;
    for (double x : g.nodes()) {
        coef = std::max(coef, std::abs(eta.drift(x).value() - cplx(0.0, -2.0 * b)));
        coef = std::max(coef, std::abs(eta.potential(x).value() + eta.constant_shift - (b * b + d * d)));
        coef = std::max(coef, std::abs(H.potential(x).value() + H.constant_shift));
        coef = std::max(coef, std::abs(h0.potential(x).value() + h0.constant_shift));
    }
    double lam = 0.0, res = 0.0;
    for (double k : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const auto st = analytic_states_constant(StateKind::eta, k, u, g);
        lam = std::max(lam, std::abs(st.eigenvalue - (k * k + d * d)));
        res = std::max(res, eigen_residual(eta, st));
    }
    const bool pass = coef <= 1e-12 && lam == 0.0 && res <= 1e-10;
    return {pass, fmt("coefficient error %.1e", coef) + fmt(", |lambda - k^2 - d^2| %.1e", lam) +
                      fmt(", eigen residual %.1e", res)};
}

Outcome sech2_example() {
    const double a = 1.0, c = 1.0, d = -1.0, b = 1.0;
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("poschl_teller", {d, b, a, c});
    const auto w = superpotential_from_u(u, g);
    double worst = 0.0;
    for (double x : g.nodes()) {
        const Jet W = w.W(x);
        const double vbar = (W * W - W.derivative()).value().real();
        const double t = 2 * a * x + 2 * c;
        const double Wt = b * b + d * d - a * a + (a * a + b * b + d * d) * std::cosh(t) - 2 * a * d * std::sinh(t);
        const double closed = d * d + 4 * a * a * (a * a - d * d) / Wt - 12 * std::pow(a, 4) * b * b / (Wt * Wt);
        worst = std::max(worst, std::abs(vbar - closed));
    }
    // V̄ − d² carries the decay; it is formed without cancellation
    const Fn excess = eta_bar_potential_excess(u);
    const auto diag = check_scattering_condition([&](double x) { return excess(x).value(); }, g);
    const double expected = -2.0 * a;
    const double rate_err = std::abs(diag.tail_rate - expected) / std::abs(expected);
    const bool pass = worst <= 1e-10 && rate_err <= 0.05;
    // diagnostic only: the same fit away from a = −d
    const auto generic = catalogue("poschl_teller", {-0.5, b, a, c});
    const Fn gex = eta_bar_potential_excess(generic);
    const double grate = check_scattering_condition([&](double x) { return gex(x).value(); }, g).tail_rate;
    return {pass, fmt("pointwise deviation %.1e", worst) + fmt(", tail rate %.4f", diag.tail_rate) +
                      fmt(" vs -2a = %.1f", expected) + fmt(" (d = -0.5 gives %.4f)", grate)};
}

Outcome identity_suite() {
    const HalfLineGrid g(20.0, 401);
    SuiteOptions o;
    o.n_tests = 20;
    o.spectral = false;
    o.metric = false;
    double worst = 0.0;
    int controls = 0, detected = 0;
    for (const char* entry : {"constant", "poschl_teller"}) {
        for (const auto& r : run_suite(entry, {-1.0, 1.0, 1.0, 1.0}, g, o)) {
            if (r.negative_control) {
                ++controls;
                detected += r.residual > 1e-8 ? 1 : 0;
            } else if (r.name.rfind("identity.", 0) == 0) {
                worst = std::max(worst, r.residual);
            }
        }
    }
    const bool pass = worst < 1e-8 && controls > 0 && detected == controls;
    return {pass, fmt("worst residual %.1e", worst) + ", controls detected " + std::to_string(detected) + "/" +
                      std::to_string(controls)};
}

Outcome discrete_metric() {
    const auto u = catalogue("constant", {-1.0, 0.5, 1.0, 1.0});
    auto at = [&](std::size_t n) {
        const HalfLineGrid g(20.0, n);
        const auto w = superpotential_from_u(u, g);
        const auto eta = assemble_eta_matrix(w, g);
        const auto rho = hermitian_sqrt(eta);
        const auto sim = equivalent_h(rho, assemble_H_matrix(w, u.params.alpha, g));
        return std::tuple{hermiticity_residual(eta.entries),
                          relative_difference(rho.rho_matrix * rho.rho_matrix, eta.entries), sim.r_h};
    };
    const auto [herm, recon, rh] = at(401);
    const auto [herm2, recon2, rh2] = at(802);
    const double gain = rh / rh2;
    const bool pass = std::max(herm, herm2) < 1e-13 && std::max(recon, recon2) < 1e-10 && rh < 1e-5 && gain >= 4.0;
    return {pass, fmt("eta hermiticity %.1e", std::max(herm, herm2)) +
                      fmt(", sqrt reconstruction %.1e", std::max(recon, recon2)) + fmt(", r_h %.2e", rh) +
                      fmt(" (1e-5), doubling gain %.2f (4)", gain)};
}

Outcome cross_formula() {
    const HalfLineGrid g(20.0, 401);
    const auto complex_alpha = run_metric_pipeline(catalogue("constant", {-1.0, 0.5, 1.0, 1.0}), g);
    const auto real_alpha = run_metric_pipeline(catalogue("constant", {-1.0, 0.0, 1.0, 1.0}), g);
    const bool pass = !complex_alpha.lhospital && complex_alpha.resolvent_error < 1e-3 && real_alpha.lhospital &&
                      real_alpha.resolvent_error < 1e-3;
    return {pass, fmt("complex alpha %.2e", complex_alpha.resolvent_error) +
                      fmt(", real alpha (l'Hospital) %.2e", real_alpha.resolvent_error) + " (1e-3)"};
}

Outcome singularity_probe() {
    const auto rep = spectral_singularity_probe(1.0, {-1.0, -0.5, -0.25, -0.1}, 20.0, 401);
    std::string rows;
    for (const auto& r : rep.rows) rows += fmt(" %.3g", r.cond_rho) + fmt("/%.2e", r.r_h);
    const HalfLineGrid g(20.0, 401);
    TransformationFunction u0 = catalogue("constant", {-1.0, 1.0, 1.0, 1.0});
    u0.params = AsymptoticParams::unchecked(0.0, 1.0);
    const auto w0 = superpotential_from_u(u0, g);
    bool raised = false;
    try {
        h_via_resolvent(hermitian_sqrt(assemble_eta_matrix(w0, g)),
                        discretize_ladder(make_ladder(Flavor::L_star, w0), g),
                        assemble_h0_matrix(w0, u0.params.alpha, g), u0.params.alpha);
    } catch (const AlphaOnSpectrum&) {
        raised = true;
    }
    const bool pass = rep.cond_monotone && rep.r_h_monotone && raised;
    return {pass, std::string("cond(rho) ") + (rep.cond_monotone ? "increasing" : "not increasing") + ", r_h " +
                      (rep.r_h_monotone ? "increasing" : "not increasing") + ", d=0 " +
                      (raised ? "raises AlphaOnSpectrum" : "does not raise") + "; cond/r_h:" + rows};
}

Outcome broken_susy() {
    const double d = -1.0;
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("constant", {d, 0.5, 1.0, 1.0});
    const auto rho = hermitian_sqrt(assemble_eta_matrix(superpotential_from_u(u, g), g));
    const auto pt = catalogue("poschl_teller", {d, 1.0, 1.0, 1.0});
    const double n10 = inverse_rho_norm(pt, 10.0, 401), n20 = inverse_rho_norm(pt, 20.0, 801),
                 n40 = inverse_rho_norm(pt, 40.0, 1601);
    const bool pass = rho.eigen_floor >= 0.5 * d * d && n10 < n20 && n20 < n40;
    return {pass, fmt("lambda_min %.4f", rho.eigen_floor) + fmt(" (>= %.2f)", 0.5 * d * d) +
                      fmt(", |1/rho| over X=10,20,40: %.3g", n10) + fmt(", %.3g", n20) + fmt(", %.3g", n40)};
}

}  // namespace

int main() {
    run(1, "constant-coefficient example", 1.0, constant_example);
    run(2, "sech2 example", 5.0, sech2_example);
    run(3, "identity suite", 10.0, identity_suite);
    run(4, "discrete metric", 30.0, discrete_metric);
    run(5, "cross-formula oracle", 30.0, cross_formula);
    run(6, "spectral-singularity probe", 60.0, singularity_probe);
    run(7, "broken supersymmetry", 10.0, broken_susy);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
