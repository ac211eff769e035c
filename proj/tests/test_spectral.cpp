#include <doctest.h>

#include <cmath>

#include "susyeta/errors.hpp"
#include "susyeta/spectral.hpp"

using namespace susyeta;

namespace {

const double A = std::sqrt(2.0 / M_PI);

double max_diff(const GridFunction& f, const std::function<cplx(double)>& g) {
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, std::abs(f[j] - g(f.grid.node(j))));
    return worst;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("closed forms of the constant entry") {
    const HalfLineGrid g(30.0, 801);
    const auto u = catalogue("constant", {-1.0, 1.0, 1.0, 1.0});
    const auto s0 = analytic_states_constant(StateKind::eta0_bar, 1.0, u, g);
    CHECK(std::abs(s0.eigenvalue - 2.0) < 1e-15);
    CHECK(max_diff(s0.values, [](double x) { return cplx(A * std::sin(x)); }) < 1e-15);

    const auto se = analytic_states_constant(StateKind::eta, 1.0, u, g);
    const auto oracle = [](double x) {
        return std::exp(cplx(0, -x)) * (-std::sin(x) - std::cos(x)) * A / std::sqrt(2.0);
    };
    CHECK(max_diff(se.values, oracle) < 1e-14);
    CHECK(eigen_residual(build_eta(superpotential_from_u(u, g)), se) < 1e-10);

    // k → 0: the η̄ state vanishes like k·x and λ → d²
    const auto tiny = analytic_states_constant(StateKind::eta_bar, 1e-8, u, g);
    CHECK(tiny.values.values.cwiseAbs().maxCoeff() < A * 1e-8 * (g.x_max() + 1.0));
    CHECK(std::abs(tiny.eigenvalue - 1.0) < 1e-15);

    const auto h = analytic_states_constant(StateKind::H, 1.0, u, g);
    CHECK(state_boundary_residual(build_H(superpotential_from_u(u, g), u.params.alpha).boundary, h) < 1e-13);
    CHECK(std::abs(h.eigenvalue - 1.0) < 1e-15);

    CHECK_THROWS_AS(analytic_states_constant(StateKind::eta, 1.0, catalogue("poschl_teller", {-1, 1, 1, 1}), g),
                    WrongEntry);
    CHECK(state_kind_from_string(to_string(StateKind::h0)) == StateKind::h0);
}

TEST_CASE("darboux maps") {
    const HalfLineGrid g(30.0, 801);
    const auto u = catalogue("constant", {-1.0, 0.0, 1.0, 1.0});
    const auto s0 = analytic_states_constant(StateKind::eta0_bar, 1.0, u, g);
    const auto fwd = darboux_map_forward(s0, u);
    CHECK(max_diff(fwd.values, [](double x) { return cplx(A * (-std::sin(x) - std::cos(x)) / std::sqrt(2.0)); }) <
          1e-14);
    const auto back = darboux_map_backward(fwd, u);
    CHECK((back.values.values - s0.values.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(back.values[0]) < 1e-14);

    const auto pt = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
    const auto eb0 = build_eta0_bar(pt, g), eb = build_eta_bar(pt, g);
    const auto n0 = solve_scattering(eb0, 1.0, g);
    const auto n1 = darboux_map_forward(n0, pt);
    CHECK(eigen_residual(eb, n1) < 1e-6);
    CHECK(state_boundary_residual(eb.boundary, n1) < 1e-9);
    const auto rt = darboux_map_backward(n1, pt);
    CHECK((rt.values.values - n0.values.values).cwiseAbs().maxCoeff() < 1e-9);

    ScatteringState zero = s0;
    zero.eigenvalue = 0.0;
    CHECK_THROWS_AS(darboux_map_forward(zero, u), ZeroMode);
    CHECK_THROWS_AS(darboux_map_backward(zero, u), ZeroMode);
}

TEST_CASE("phase map") {
    const HalfLineGrid g(30.0, 801);
    const auto u = catalogue("constant", {-1.0, 1.0, 1.0, 1.0});
    const auto sb = analytic_states_constant(StateKind::eta_bar, 1.0, u, g);
    const auto id = phase_map(sb, constant_fn(0.0));
    CHECK((id.values.values - sb.values.values).cwiseAbs().maxCoeff() == 0.0);
    const auto mapped = phase_map(sb, u.omega_fn());
    const auto direct = analytic_states_constant(StateKind::eta, 1.0, u, g);
    CHECK((mapped.values.values - direct.values.values).cwiseAbs().maxCoeff() < 1e-13);
    for (std::size_t j = 0; j < g.n(); ++j) CHECK(std::abs(std::abs(mapped.values[j]) - std::abs(sb.values[j])) < 1e-15);
}

TEST_CASE("scattering solver") {
    const HalfLineGrid g(30.0, 801);
    SUBCASE("free dirichlet operator") {
        SchrodingerOperator free;
        free.name = "free";
        free.potential = constant_fn(1.0);
        free.drift = constant_fn(0.0);
        free.boundary = BoundaryCondition::dirichlet();
        const auto s = solve_scattering(free, 1.0, g);
        CHECK(std::abs(s.eigenvalue - 2.0) < 1e-14);
        CHECK(max_diff(s.values, [](double x) { return cplx(A * std::sin(x)); }) < 1e-8);
    }
    SUBCASE("constant eta-bar against the closed form") {
        const auto u = catalogue("constant", {-1.0, 0.0, 1.0, 1.0});
        const auto s = solve_scattering(build_eta_bar(u, g), 1.0, g);
        const auto c = analytic_states_constant(StateKind::eta_bar, 1.0, u, g);
        CHECK((s.values.values - c.values.values).cwiseAbs().maxCoeff() < 1e-7);
    }
    SUBCASE("sech2 eta0-bar") {
        const auto pt = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
        const auto s = solve_scattering(build_eta0_bar(pt, g), 0.5, g);
        CHECK(eigen_residual(build_eta0_bar(pt, g), s) < 1e-6);
        CHECK(std::abs(s.eigenvalue - (0.25 + 1.0)) < 1e-6);
    }
    SUBCASE("guards") {
        SchrodingerOperator grow;
        grow.potential = [](double x) { return Jet::variable(x) * 0.1; };
        grow.drift = constant_fn(0.0);
        CHECK_THROWS_AS(solve_scattering(grow, 1.0, g), NoDecay);
        const auto u = catalogue("constant", {-1.0, 1.0, 1.0, 1.0});
        CHECK_THROWS_AS(solve_scattering(build_eta(superpotential_from_u(u, g)), 1.0, g), InvalidParams);
    }
}

TEST_CASE("packet gram of delta-normalized states") {
    const HalfLineGrid g(50.0, 1001);
    const auto u = catalogue("constant", {-1.0, 0.0, 1.0, 1.0});
    const auto pg = packet_gram([&](double k) { return analytic_states_constant(StateKind::eta_bar, k, u, g); },
                                {1.0, 1.5}, 0.1, g, 41);
    CHECK((pg.gram - pg.reference.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("1/rho is not square integrable") {
    const auto u = catalogue("poschl_teller", {-1.0, 1.0, 1.0, 1.0});
    const double a = inverse_rho_norm(u, 10.0, 401), b = inverse_rho_norm(u, 20.0, 801),
                 c = inverse_rho_norm(u, 40.0, 1601);
    CHECK(a < b);
    CHECK(b < c);
}

}
