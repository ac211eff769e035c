#include <doctest.h>

#include <cmath>

#include "susyeta/errors.hpp"
#include "susyeta/operators.hpp"
#include "susyeta/transformation.hpp"

using namespace susyeta;

namespace {

// V̄ of the sech² entry in closed form
double vbar_closed(double x, double a, double c, double d, double b) {
    const double t = 2 * a * x + 2 * c;
    const double Wt = b * b + d * d - a * a + (a * a + b * b + d * d) * std::cosh(t) - 2 * a * d * std::sinh(t);
    return d * d + 4 * a * a * (a * a - d * d) / Wt - 12 * std::pow(a, 4) * b * b / (Wt * Wt);
}

}  // namespace

TEST_SUITE("transformation") {

TEST_CASE("asymptotic params") {
    const auto p = AsymptoticParams::make(-1.0, 0.5);
    CHECK(p.beta == doctest::Approx(0.25 - 1.0));
    CHECK(p.gamma == doctest::Approx(1.0));
    CHECK(std::abs(p.alpha - (-(p.s() * p.s()))) < 1e-15);
    CHECK(std::abs(p.alpha - cplx(p.beta, p.gamma)) < 1e-15);
    CHECK_THROWS_AS(AsymptoticParams::make(0.0, 1.0), InvalidParams);
    CHECK_THROWS_AS(AsymptoticParams::make(0.3, 1.0), InvalidParams);
    CHECK_NOTHROW(AsymptoticParams::unchecked(0.0, 1.0));
}

TEST_CASE("superpotential of the constant entry") {
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("constant", {-1.0, 0.5, 1.0, 1.0});
    const auto w = superpotential_from_u(u, g);
    for (double x : {0.0, 3.3, 19.0}) {
        CHECK(std::abs(w.w(x).value() - cplx(-1.0, 0.5)) < 1e-14);
        CHECK(std::abs(w.w(x).deriv(1)) < 1e-14);
        CHECK(std::abs(w.W(x).value() + 1.0) < 1e-14);
    }
    const auto u0 = catalogue("constant", {-1.0, 0.0, 1.0, 1.0});
    CHECK(std::abs(u0.rho(2.0).value() - std::exp(-2.0)) < 1e-15);
    CHECK(std::abs(u0.omega(2.0).value()) == 0.0);
}

TEST_CASE("sech2 entry values") {
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("poschl_teller", {-1.0, 0.0, 1.0, 1.0});
    CHECK(std::abs(u.rho(0.0).value() - 0.8807970779778823) < 1e-14);
    const auto w = superpotential_from_u(u, g);
    CHECK(std::abs(w.w(0.0).value() + 0.7615941559557649) < 1e-14);
    CHECK_THROWS_AS(catalogue("poschl_teller", {0.0, 0.0, 1.0, 1.0}), InvalidParams);
    CHECK_THROWS_AS(catalogue("poschl_teller", {-1.0, 0.0, -1.0, 1.0}), InvalidParams);
    CHECK_THROWS_AS(catalogue("poschl_teller", {-1.0, 0.0, 1.0, 0.0}), InvalidParams);
    CHECK_THROWS_AS(catalogue("morse", {-1.0, 0.0, 1.0, 1.0}), UnknownEntry);
    CHECK(canonical_entry_name("poschl-teller") == "poschl_teller");
}

TEST_CASE("w = W + i omega' and matches differences of log u") {
    const HalfLineGrid g(20.0, 401);
    const auto u = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
    const auto w = superpotential_from_u(u, g);
    for (double x : {0.0, 0.7, 5.0, 18.0}) {
        const cplx lhs = w.w(x).value();
        CHECK(std::abs(lhs - (w.W(x).value() + cplx(0, 1) * u.omega(x).deriv(1))) < 1e-12);
        CHECK(std::abs(w.W(x).value().imag()) == 0.0);
    }
    // 4th-order difference of log u
    auto fd_err = [&](std::size_t n) {
        const HalfLineGrid gg(4.0, n);
        const double h = gg.h();
        double worst = 0.0;
        for (std::size_t j = 2; j + 2 < gg.n(); ++j) {
            const double x = gg.node(j);
            auto lu = [&](double t) { return u.log_u(t).value(); };
            const cplx d = (-lu(x + 2 * h) + 8.0 * lu(x + h) - 8.0 * lu(x - h) + lu(x - 2 * h)) / (12 * h);
            worst = std::max(worst, std::abs(d - w.w(x).value()));
        }
        return worst;
    };
    CHECK(fd_err(101) / fd_err(201) > 12.0);
}

TEST_CASE("pole and tail guards") {
    TransformationFunction bad = catalogue("constant", {-1.0, 0.0, 1.0, 1.0});
    bad.log_rho_excess = [](double x) { return log(Jet::variable(x) - 1.0 + cplx(0.0, 0.0)) * 2.0; };
    bad.log_u_excess = nullptr;
    bad.vbar_excess = nullptr;
    CHECK_THROWS_AS(superpotential_from_u(bad, HalfLineGrid::exact(2.0, 3)), PoleDetected);

    const auto u = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
    const auto rep = check_tail(u, HalfLineGrid(20.0, 401));
    CHECK(rep.rho_drift < 1e-10);
    CHECK(rep.omega_mismatch < 1e-10);
}

TEST_CASE("solve_phase") {
    const HalfLineGrid g(20.0, 401);
    SUBCASE("constant rho gives omega = b x") {
        const auto p = AsymptoticParams::make(-1.0, 0.5);
        const Fn log_rho = [](double x) { return Jet::variable(x) * -1.0; };
        const auto sol = solve_phase(log_rho, p, g);
        for (std::size_t j = 0; j < g.n(); j += 50) {
            CHECK(std::abs(sol.omega_nodes[Eigen::Index(j)] - 0.5 * g.node(j)) < 1e-10);
            CHECK(std::abs(sol.omega_prime_nodes[Eigen::Index(j)] - 0.5) < 1e-12);
        }
    }
    SUBCASE("zero source gives zero phase") {
        const auto p = AsymptoticParams::make(-1.0, 0.0);
        const auto u = catalogue("poschl_teller", {-1.0, 0.0, 1.0, 1.0});
        const auto sol = solve_phase(u.log_rho_fn(), p, g);
        CHECK(sol.omega_nodes.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("sech2 entry satisfies the phase equation and the closed-form phase") {
        const auto u = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
        const auto sol = solve_phase(u.log_rho_fn(), u.params, g);
        CHECK(phase_ode_residual(sol.omega, u.log_rho_fn(), u.params.gamma, g) < 1e-8);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j)
            worst = std::max(worst, std::abs(sol.omega_prime_nodes[Eigen::Index(j)] - u.omega(g.node(j)).deriv(1)));
        CHECK(worst < 1e-9);
    }
    SUBCASE("short box misses the tail") {
        const auto u = catalogue("poschl_teller", {-0.2, 1.0, 0.3, 0.1});
        CHECK_THROWS_AS(solve_phase(u.log_rho_fn(), u.params, HalfLineGrid(2.0, 101), 1e-6), TailMismatch);
    }
}

TEST_CASE("scattering condition") {
    const HalfLineGrid g(20.0, 401);
    const auto z = check_scattering_condition([](double) { return cplx(0.0); }, g);
    CHECK(z.integral == 0.0);
    CHECK(z.scattering);
    const auto v0 = check_scattering_condition(
        [](double x) { return cplx(-2.0 / std::pow(std::cosh(x + 1.0), 2)); }, g);
    CHECK(std::isfinite(v0.integral));
    CHECK(v0.scattering);
    CHECK(v0.tail_rate == doctest::Approx(-2.0).epsilon(1e-3));
    const auto one = check_scattering_condition([](double) { return cplx(1.0); }, g);
    CHECK_FALSE(one.scattering);
}

TEST_CASE("V-bar of the sech2 entry against its closed form") {
    const HalfLineGrid g(20.0, 401);
    for (auto [d, b] : {std::pair{-1.0, 1.0}, std::pair{-0.5, 1.0}, std::pair{-1.5, 0.0}}) {
        const auto u = catalogue("poschl_teller", {d, b, 1.0, 1.0});
        const auto eb = build_eta_bar(u, g);
        double worst = 0.0;
        for (double x : g.nodes()) worst = std::max(worst, std::abs(eb.potential(x).value() - vbar_closed(x, 1.0, 1.0, d, b)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("V-bar excess keeps relative precision in the tail") {
    const HalfLineGrid g(20.0, 401);
    auto closed_excess = [](double x, double a, double c, double d, double b) {
        const double t = 2 * a * x + 2 * c;
        const double Wt = b * b + d * d - a * a + (a * a + b * b + d * d) * std::cosh(t) - 2 * a * d * std::sinh(t);
        return 4 * a * a * (a * a - d * d) / Wt - 12 * std::pow(a, 4) * b * b / (Wt * Wt);
    };
    for (auto [d, b] : {std::pair{-1.0, 1.0}, std::pair{-0.5, 1.0}, std::pair{-1.5, 0.3}}) {
        const auto u = catalogue("poschl_teller", {d, b, 1.0, 1.0});
        const Fn ex = eta_bar_potential_excess(u);
        for (double x : {0.0, 1.0, 5.0, 12.0, 19.5}) {
            const double want = closed_excess(x, 1.0, 1.0, d, b);
            CHECK(std::abs(ex(x).value().real() - want) <= 1e-12 * std::abs(want) + 1e-300);
        }
        // and agrees with the generic route where nothing cancels
        TransformationFunction plain = u;
        plain.vbar_excess = nullptr;
        const Fn gen = eta_bar_potential_excess(plain);
        CHECK(std::abs(gen(1.0).value() - ex(1.0).value()) < 1e-13);
    }
}

}
