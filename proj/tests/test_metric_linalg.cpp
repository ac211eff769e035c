#include <doctest.h>

#include <cmath>

#include "susyeta/errors.hpp"
#include "susyeta/metric_linalg.hpp"
#include "susyeta/spectral.hpp"

using namespace susyeta;

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Fn fn(std::function<Jet(const Jet&)> f) {
    return [f](double x) { return f(Jet::variable(x)); };
}

struct Setup {
    HalfLineGrid grid;
    TransformationFunction u;
    Superpotential w;
    Setup(CatalogueParams p, double X, std::size_t n, const std::string& entry = "constant")
        : grid(X, n), u(catalogue(entry, p)), w(superpotential_from_u(u, grid)) {}
};

double interior_max(const Vec& v, Eigen::Index skip) {
    return v.segment(skip, v.size() - 2 * skip).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("metric_linalg") {

TEST_CASE("hermitian square root of small matrices") {
    const auto id = hermitian_sqrt(Mat::Identity(3, 3));
    CHECK((id.rho_matrix - Mat::Identity(3, 3)).norm() < 1e-15);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const auto r = hermitian_sqrt(d);
    CHECK(std::abs(r.rho_matrix(0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(r.rho_matrix(1, 1) - 3.0) < 1e-15);
    CHECK(r.rho_matrix.cwiseAbs()(0, 1) < 1e-15);
    CHECK(r.condition_number == doctest::Approx(1.5));
    CHECK((r.rho_inverse * r.rho_matrix - Mat::Identity(2, 2)).norm() < 1e-15);

    Mat neg = Mat::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(hermitian_sqrt(neg), NotPositiveDefinite);
    Mat nh = Mat::Identity(2, 2);
    nh(0, 1) = 0.5;
    CHECK_THROWS_AS(hermitian_sqrt(nh), InvalidParams);
}

TEST_CASE("ladder discretization") {
    Setup s({-1.0, 0.0, 1.0, 1.0}, 4.0, 401);
    SUBCASE("bare -D on samples of x") {
        LadderOperator minus_d{Flavor::L, -1, constant_fn(0.0)};
        const auto m = discretize_ladder(minus_d, s.grid);
        CHECK(m.domain == Space::midpoints);
        CHECK(m.codomain == Space::nodes);
        const Vec out = m.apply_to_samples(sample_on(fn([](const Jet& x) { return x; }), s.grid, Space::midpoints));
        // the last rows carry the natural boundary term of the adjoint
        CHECK(interior_max(out.array() + 1.0, 4) < 1e-10);
    }
    SUBCASE("L-dagger annihilates e^x when d = -1") {
        const auto m = discretize_ladder(make_ladder(Flavor::L_dagger, s.w), s.grid);
        const Vec f = sample_on(fn([](const Jet& x) { return exp(x); }), s.grid, Space::nodes);
        const Vec out = m.apply_to_samples(f);
        const Vec rel = (out.cwiseAbs().array() / space_points(s.grid, Space::midpoints).array().exp()).cast<cplx>();
        // first and last midpoints use one-sided stencils
        CHECK(interior_max(rel, 1) < 1e-8);
    }
    SUBCASE("L and L-dagger are weighted adjoints") {
        Setup c({-1.0, 0.5, 1.0, 1.0}, 20.0, 201, "poschl_teller");
        const auto L = discretize_ladder(make_ladder(Flavor::L, c.w), c.grid);
        const auto Ld = discretize_ladder(make_ladder(Flavor::L_dagger, c.w), c.grid);
        CHECK(relative_difference(L.entries, weighted_adjoint(Ld).entries) < 1e-8);
        // the weighted adjoint in plain samples: ⟨f, L g⟩ = ⟨L† f, g⟩
        const Vec f = sample_on(fn([](const Jet& x) { return exp(-x * x / 4.0) * cplx(1.0, 0.3); }), c.grid, Space::nodes);
        const Vec g = sample_on(fn([](const Jet& x) { return sin(x) * exp(-x / 3.0); }), c.grid, Space::midpoints);
        const Eigen::VectorXd wu = space_weights(c.grid, Space::nodes), wf = space_weights(c.grid, Space::midpoints);
        const cplx lhs = (f.conjugate().array() * wu.array() * L.apply_to_samples(g).array()).sum();
        const cplx rhs = (Ld.apply_to_samples(f).conjugate().array() * wf.array() * g.array()).sum();
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
    }
    const Vec v = Vec::Random(401);
    CHECK((from_weighted(s.grid, Space::nodes, to_weighted(s.grid, Space::nodes, v)) - v).norm() < 1e-13);
}

TEST_CASE("eta matrix") {
    SUBCASE("hermitian by construction") {
        for (auto p : {CatalogueParams{-1.0, 0.5, 1.0, 1.0}, CatalogueParams{-0.3, 2.0, 1.0, 1.0}}) {
            for (const char* e : {"constant", "poschl_teller"}) {
                Setup s(p, 20.0, 201, e);
                const auto eta = assemble_eta_matrix(s.w, s.grid);
                CHECK(eta.hermitian_hint);
                CHECK(hermiticity_residual(eta.entries) < 1e-13);
            }
        }
    }
    SUBCASE("spectrum floor at d^2") {
        Setup s({-1.0, 0.0, 1.0, 1.0}, 20.0, 201);
        const auto rho = hermitian_sqrt(assemble_eta_matrix(s.w, s.grid));
        CHECK(rho.deflated == 1);
        CHECK(rho.eigen_floor >= 1.0 - 1e-3);
    }
    SUBCASE("closed-form eigenstate") {
        Setup s({-1.0, 0.5, 1.0, 1.0}, 20.0, 801);
        const auto eta = assemble_eta_matrix(s.w, s.grid);
        const auto st = analytic_states_constant(StateKind::eta, 1.0, s.u, s.grid);
        const Vec psi = st.values.values;
        const Vec r = eta.apply_to_samples(psi) - st.eigenvalue * psi;
        // boundary and truncation rows excluded
        CHECK(interior_max(r, 8) / psi.cwiseAbs().maxCoeff() < 1e-4);
    }
    SUBCASE("square root reconstructs eta") {
        Setup s({-1.0, 0.5, 1.0, 1.0}, 20.0, 401);
        const auto eta = assemble_eta_matrix(s.w, s.grid);
        const auto rho = hermitian_sqrt(eta);
        const Mat P = rho.basis * rho.basis.adjoint();
        CHECK(relative_difference(rho.rho_matrix * rho.rho_matrix, P * eta.entries * P) < 1e-10);
        const double lmax = rho.eigenvalues[rho.eigenvalues.size() - 1];
        CHECK(rho.condition_number == doctest::Approx(std::sqrt(lmax / rho.eigen_floor)).epsilon(1e-12));
    }
}

TEST_CASE("equivalent Hermitian Hamiltonian") {
    SUBCASE("real alpha") {
        Setup s({-1.0, 0.0, 1.0, 1.0}, 20.0, 401);
        const auto p = run_metric_pipeline(s.u, s.grid);
        CHECK(p.similarity.r_h < 1e-10);
        CHECK(p.lhospital);
        CHECK(p.resolvent_error < 1e-3);
    }
    SUBCASE("complex alpha, resolvent agreement") {
        Setup s({-1.0, 0.5, 1.0, 1.0}, 20.0, 401);
        const auto p = run_metric_pipeline(s.u, s.grid);
        CHECK_FALSE(p.lhospital);
        CHECK(p.resolvent_error < 1e-2);
        // the modes the grid resolves are Hermitian to far better than the full matrix
        CHECK(windowed_hermiticity(p.similarity.h, p.rho, 5.0) < 1e-3);
    }
    SUBCASE("coefficient and factorized H agree on smooth vectors") {
        Setup s({-1.0, 0.5, 1.0, 1.0}, 20.0, 401, "poschl_teller");
        const auto Hf = assemble_H_matrix(s.w, s.u.params.alpha, s.grid);
        const auto Hc = assemble_H_matrix_coefficient(s.w, s.u.params.alpha, s.grid);
        const Vec f = to_weighted(s.grid, Space::nodes,
                                  sample_on(fn([](const Jet& x) { return exp(-(x - 5.0) * (x - 5.0)); }), s.grid,
                                            Space::nodes));
        CHECK((Hf.entries * f - Hc.entries * f).norm() / (Hf.entries * f).norm() < 1e-2);
    }
}

TEST_CASE("isometry") {
    const HalfLineGrid g(20.0, 201);
    OperatorMatrix id{Mat::Identity(5, 5), g};
    const auto trivial = isometry_U(id, id);
    CHECK((trivial.U.entries - Mat::Identity(5, 5)).norm() < 1e-15);
    CHECK(trivial.defect < 1e-15);

    Setup s({-1.0, 0.5, 1.0, 1.0}, 20.0, 401);
    const auto eta0 = assemble_eta0_matrix(s.w, s.grid);
    const auto L = discretize_ladder(make_ladder(Flavor::L, s.w), s.grid);
    const auto U = isometry_U(eta0, L);
    CHECK(U.defect < 1e-4);

    OperatorMatrix bad = id;
    bad.entries(2, 2) = 0.0;
    CHECK_THROWS_AS(isometry_U(bad, id), NotPositiveDefinite);
}

TEST_CASE("isometry maps h0 states onto normalized rho phi") {
    // X = 6π puts a node of sin x at the far end
    Setup s({-1.0, 0.5, 1.0, 1.0}, 6 * M_PI, 401);
    const double k = 1.0;
    const cplx alpha = s.u.params.alpha;
    const auto eta = assemble_eta_matrix(s.w, s.grid);
    const auto rho = hermitian_sqrt(eta);
    const auto eta0 = assemble_eta0_matrix(s.w, s.grid);
    const auto L = discretize_ladder(make_ladder(Flavor::L, s.w), s.grid);
    const auto U = isometry_U(eta0, L);
    const Vec psi = to_weighted(s.grid, Space::midpoints,
                                sample_on(fn([k](const Jet& x) { return sin(x * k); }), s.grid, Space::midpoints));
    const auto phi = analytic_states_constant(StateKind::H, k, s.u, s.grid);
    const Vec a = U.U.entries * psi;
    const Vec b = std::pow(k * k - alpha, -0.5) * (rho.rho_matrix * to_weighted(s.grid, Space::nodes, phi.values.values));
    const double cosang = std::abs(a.dot(b)) / (a.norm() * b.norm());
    CHECK(std::acos(std::min(1.0, cosang)) < 1e-3);
}

TEST_CASE("resolvent guards") {
    Setup s({-1.0, 1.0, 1.0, 1.0}, 20.0, 201);
    TransformationFunction u0 = s.u;
    u0.params = AsymptoticParams::unchecked(0.0, 1.0);
    const auto w0 = superpotential_from_u(u0, s.grid);
    const auto rho = hermitian_sqrt(assemble_eta_matrix(w0, s.grid));
    CHECK_THROWS_AS(h_via_resolvent(rho, discretize_ladder(make_ladder(Flavor::L_star, w0), s.grid),
                                    assemble_h0_matrix(w0, u0.params.alpha, s.grid), u0.params.alpha),
                    AlphaOnSpectrum);
}

TEST_CASE("kernel detection") {
    // u = (x − x₀)e^{−x} has a node next to a midpoint; the pole of w cuts the
    // box in two and each half keeps its own near-kernel
    const HalfLineGrid g(20.0, 201);
    Superpotential w;
    w.w = [](double x) { return Jet(-1.0) + Jet(1.0) / (Jet::variable(x) - (3.05 + 1e-9)); };
    w.W = w.w;
    w.W_minus_d = w.w;
    CHECK_THROWS_AS(assemble_eta_matrix(w, g), KernelDetected);
}

TEST_CASE("singularity probe") {
    const auto rep = spectral_singularity_probe(1.0, {-1.0, -0.5, -0.25, -0.1}, 20.0, 201);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.cond_monotone);
    CHECK(rep.rows[3].near_singular);
    CHECK_FALSE(rep.rows[0].near_singular);
    const auto herm = spectral_singularity_probe(0.0, {-1.0, -0.5, -0.25, -0.1}, 20.0, 201);
    for (const auto& r : herm.rows) CHECK(r.r_h < 1e-8);
}

}
