#include "susyeta/metric_linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <sstream>

#include "susyeta/errors.hpp"

namespace susyeta {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }

// 4-point interpolation and first-derivative stencils from nodes onto midpoints
struct Stencils {
    Eigen::MatrixXd D, I;
};

Stencils staggered_stencils(const HalfLineGrid& grid) {
    const std::size_t n = grid.n();
    Stencils s{Eigen::MatrixXd::Zero(idx(n - 1), idx(n)), Eigen::MatrixXd::Zero(idx(n - 1), idx(n))};
    for (std::size_t m = 0; m + 1 < n; ++m) {
        const std::size_t lo = std::min<std::size_t>(m > 0 ? m - 1 : 0, n - 4);
        std::vector<double> xs(4);
        for (std::size_t i = 0; i < 4; ++i) xs[i] = double(lo + i) - double(m) - 0.5;  // in units of h
        const auto d1 = fd_weights(0.0, xs, 1);
        const auto d0 = fd_weights(0.0, xs, 0);
        for (std::size_t i = 0; i < 4; ++i) {
            s.D(idx(m), idx(lo + i)) = d1[i] / grid.h();
            s.I(idx(m), idx(lo + i)) = d0[i];
        }
    }
    return s;
}

// weighted D_s + diag(f_mid) I_s, U → F
Mat weighted_plus_ladder(const Fn& f, const HalfLineGrid& grid) {
    const Stencils s = staggered_stencils(grid);
    const Vec fm = sample_on(f, grid, Space::midpoints);
    Mat B = s.D.cast<cplx>() + fm.asDiagonal() * s.I.cast<cplx>();
    const Eigen::VectorXd su = space_weights(grid, Space::nodes).cwiseSqrt();
    const Eigen::VectorXd sf = space_weights(grid, Space::midpoints).cwiseSqrt();
    return sf.asDiagonal() * B * su.cwiseInverse().asDiagonal();
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Eigen::Index dim(const HalfLineGrid& grid, Space s) {
    return idx(s == Space::nodes ? grid.n() : grid.n() - 1);
}

}  // namespace

Eigen::VectorXd space_weights(const HalfLineGrid& grid, Space s) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(dim(grid, s), grid.h());
    if (s == Space::nodes) {
        w[0] *= 0.5;
        w[w.size() - 1] *= 0.5;
    }
    return w;
}

Eigen::VectorXd space_points(const HalfLineGrid& grid, Space s) {
    Eigen::VectorXd x(dim(grid, s));
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = s == Space::nodes ? grid.node(std::size_t(j)) : (double(j) + 0.5) * grid.h();
    return x;
}

Eigen::VectorXcd sample_on(const Fn& f, const HalfLineGrid& grid, Space s) {
    const Eigen::VectorXd x = space_points(grid, s);
    Vec v(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        v[j] = f(x[j]).value();
        if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag())) {
            std::ostringstream os;
            os << "coefficient is not finite at x = " << x[j];
            throw NonFiniteSample(os.str());
        }
    }
    return v;
}

Eigen::VectorXcd to_weighted(const HalfLineGrid& grid, Space s, const Eigen::VectorXcd& v) {
    return space_weights(grid, s).cwiseSqrt().cast<cplx>().cwiseProduct(v);
}

Eigen::VectorXcd from_weighted(const HalfLineGrid& grid, Space s, const Eigen::VectorXcd& v) {
    return space_weights(grid, s).cwiseSqrt().cwiseInverse().cast<cplx>().cwiseProduct(v);
}

Eigen::VectorXcd OperatorMatrix::apply_to_samples(const Eigen::VectorXcd& samples) const {
    if (samples.size() != cols()) throw GridMismatch("sample count does not match the matrix domain");
    return from_weighted(grid, codomain, entries * to_weighted(grid, domain, samples));
}

double hermiticity_residual(const Eigen::MatrixXcd& m) {
    const double nm = m.norm();
    return nm == 0.0 ? 0.0 : (m - m.adjoint()).norm() / nm;
}

double relative_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / b.norm();
}

OperatorMatrix weighted_adjoint(const OperatorMatrix& m) {
    OperatorMatrix out = m;
    out.entries = m.entries.adjoint();
    std::swap(out.domain, out.codomain);
    return out;
}

OperatorMatrix discretize_ladder(const LadderOperator& op, const HalfLineGrid& grid) {
    if (grid.n() < 4) throw GridTooSmall("staggered stencils need at least 4 nodes");
    if (op.sign > 0) {
        return OperatorMatrix{weighted_plus_ladder(op.coefficient, grid), grid, Space::nodes, Space::midpoints,
                              BoundaryCondition::dirichlet(), false};
    }
    // −D + f is the adjoint of D + f*
    const Mat partner = weighted_plus_ladder(conj(op.coefficient), grid);
    return OperatorMatrix{partner.adjoint(), grid, Space::midpoints, Space::nodes, BoundaryCondition::dirichlet(),
                          false};
}

OperatorMatrix assemble_eta_matrix(const Superpotential& w, const HalfLineGrid& grid) {
    const Mat B = discretize_ladder(make_ladder(Flavor::L_dagger, w), grid).entries;
    OperatorMatrix eta{symmetrized(B.adjoint() * B), grid, Space::nodes, Space::nodes,
                       BoundaryCondition::robin(w.w(0.0).value()), true};
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Mat>(eta.entries, Eigen::EigenvaluesOnly).eigenvalues();
    // ev[0] is the box mode
    if (ev.size() > 1 && ev[1] < 1e-10 * ev[ev.size() - 1]) {
        std::ostringstream os;
        os << "second eigenvalue " << ev[1] << " of eta is below 1e-10 lambda_max = " << ev[ev.size() - 1];
        throw KernelDetected(os.str());
    }
    return eta;
}

OperatorMatrix assemble_eta0_matrix(const Superpotential& w, const HalfLineGrid& grid) {
    const Mat B = discretize_ladder(make_ladder(Flavor::L_dagger, w), grid).entries;
    return OperatorMatrix{symmetrized(B * B.adjoint()), grid, Space::midpoints, Space::midpoints,
                          BoundaryCondition::dirichlet(), true};
}

OperatorMatrix assemble_H_matrix(const Superpotential& w, cplx alpha, const HalfLineGrid& grid) {
    const Mat B = discretize_ladder(make_ladder(Flavor::L_dagger, w), grid).entries;
    Mat H = B.transpose() * B;
    H.diagonal().array() += alpha;
    return OperatorMatrix{std::move(H), grid, Space::nodes, Space::nodes, BoundaryCondition::robin(w.w(0.0).value()),
                          false};
}

OperatorMatrix assemble_H_matrix_coefficient(const Superpotential& w, cplx alpha, const HalfLineGrid& grid) {
    const Stencils s = staggered_stencils(grid);
    const Eigen::VectorXd wu = space_weights(grid, Space::nodes);
    const Eigen::VectorXd wf = space_weights(grid, Space::midpoints);
    // ∫φ'ψ' + ∫Vφψ − w(0)φ(0)ψ(0) + w(X)φ(X)ψ(X): the robin row at 0 and the
    // natural (D + w)ψ = 0 at X
    Mat K = (s.D.transpose() * wf.asDiagonal() * s.D).cast<cplx>();
    Fn V = [f = w.w, alpha](double x) {
        const Jet v = f(x);
        return v * v - v.derivative() + alpha;
    };
    const Vec vn = sample_on(V, grid, Space::nodes);
    K.diagonal() += wu.cast<cplx>().cwiseProduct(vn);
    const Eigen::Index last = K.rows() - 1;
    K(0, 0) -= w.w(0.0).value();
    K(last, last) += w.w(grid.x_max()).value();
    const Eigen::VectorXd su = wu.cwiseSqrt().cwiseInverse();
    return OperatorMatrix{su.asDiagonal() * K * su.asDiagonal(), grid, Space::nodes, Space::nodes,
                          BoundaryCondition::robin(w.w(0.0).value()), false};
}

OperatorMatrix assemble_h0_matrix(const Superpotential& w, cplx alpha, const HalfLineGrid& grid) {
    const Mat B = discretize_ladder(make_ladder(Flavor::L_dagger, w), grid).entries;
    Mat h0 = B * B.transpose();
    h0.diagonal().array() += alpha;
    return OperatorMatrix{std::move(h0), grid, Space::midpoints, Space::midpoints, BoundaryCondition::dirichlet(),
                          false};
}

MetricSqrt hermitian_sqrt(const Eigen::MatrixXcd& eta, std::size_t deflate) {
    if (eta.rows() != eta.cols()) throw InvalidParams("metric must be square");
    if (hermiticity_residual(eta) > 1e-10) throw InvalidParams("metric is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(eta);
    const Eigen::Index keep = eta.rows() - idx(deflate);
    if (keep <= 0) throw InvalidParams("nothing left after deflation");
    MetricSqrt out;
    out.deflated = deflate;
    out.eigenvalues = es.eigenvalues().tail(keep);
    out.basis = es.eigenvectors().rightCols(keep);
    out.eigen_floor = out.eigenvalues[0];
    const double top = out.eigenvalues[keep - 1];
    if (!(out.eigen_floor > 0.0) || out.eigen_floor < 1e-15 * top) {
        std::ostringstream os;
        os << "smallest retained eigenvalue is " << out.eigen_floor;
        throw NotPositiveDefinite(os.str());
    }
    const Eigen::VectorXd r = out.eigenvalues.cwiseSqrt();
    out.rho_matrix = out.basis * r.cast<cplx>().asDiagonal() * out.basis.adjoint();
    out.rho_inverse = out.basis * r.cwiseInverse().cast<cplx>().asDiagonal() * out.basis.adjoint();
    out.condition_number = std::sqrt(top / out.eigen_floor);
    return out;
}

MetricSqrt hermitian_sqrt(const OperatorMatrix& eta) {
    const bool box_mode = eta.domain == Space::nodes && eta.rows() == idx(eta.grid.n());
    return hermitian_sqrt(eta.entries, box_mode ? 1 : 0);
}

EquivalentH equivalent_h(const MetricSqrt& rho, const OperatorMatrix& H) {
    if (H.rows() != rho.rho_matrix.rows()) throw GridMismatch("metric and Hamiltonian sizes differ");
    EquivalentH out{H, 0.0, 0.0};
    out.h.entries = rho.rho_matrix * H.entries * rho.rho_inverse;
    out.h.hermitian_hint = false;
    const double nh = out.h.entries.norm();
    out.r_h = (out.h.entries - out.h.entries.adjoint()).norm() / nh;
    const Mat other = rho.rho_inverse * H.entries.adjoint() * rho.rho_matrix;
    out.second_equality = (out.h.entries - other).norm() / nh;
    return out;
}

double windowed_hermiticity(const OperatorMatrix& h, const MetricSqrt& rho, double lambda_cut) {
    Eigen::Index m = 0;
    while (m < rho.eigenvalues.size() && rho.eigenvalues[m] <= lambda_cut) ++m;
    if (m == 0) return 0.0;
    const Mat Q = rho.basis.leftCols(m);
    const Mat hq = Q.adjoint() * h.entries * Q;
    return hermiticity_residual(hq);
}

Isometry isometry_U(const OperatorMatrix& eta0, const OperatorMatrix& L) {
    if (L.cols() != eta0.rows()) throw GridMismatch("L and eta0 act on different spaces");
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(eta0.entries));
    const Eigen::VectorXd ev = es.eigenvalues();
    if (!(ev[0] > 1e-15 * ev[ev.size() - 1])) {
        std::ostringstream os;
        os << "eta0 has eigenvalue " << ev[0];
        throw NotPositiveDefinite(os.str());
    }
    const Mat inv_sqrt = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                         es.eigenvectors().adjoint();
    Isometry out{L, 0.0};
    out.U.entries = L.entries * inv_sqrt;
    const Mat G = out.U.entries.adjoint() * out.U.entries;
    out.defect = (G - Mat::Identity(G.rows(), G.cols())).norm() / std::sqrt(double(G.rows()));
    return out;
}

ResolventH h_via_resolvent(const MetricSqrt& rho, const OperatorMatrix& L_star, const OperatorMatrix& h0,
                           cplx alpha) {
    const Eigen::Index m = h0.rows();
    const bool real_alpha = std::abs(alpha.imag()) <= 1e-14 * std::max(1.0, std::abs(alpha));
    if (real_alpha) {
        // the discrete h₀ is complex symmetric; its Hermitian part carries the real spectrum
        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Mat>(symmetrized(h0.entries), Eigen::EigenvaluesOnly).eigenvalues();
        if (alpha.real() >= ev[0] && alpha.real() <= ev[m - 1]) {
            std::ostringstream os;
            os << "alpha = " << alpha.real() << " lies in the h0 spectrum [" << ev[0] << ", " << ev[m - 1] << "]";
            throw AlphaOnSpectrum(os.str());
        }
    }
    const Mat I = Mat::Identity(m, m);
    const Eigen::PartialPivLU<Mat> lu1(h0.entries - alpha * I);
    const Eigen::PartialPivLU<Mat> lu2(h0.entries - std::conj(alpha) * I);
    const Mat R = lu1.solve(lu2.solve(L_star.entries.adjoint() * rho.rho_matrix));
    ResolventH out{L_star, real_alpha, 1.0 / std::min(lu1.rcond(), lu2.rcond())};
    out.h.entries = rho.rho_matrix * L_star.entries * h0.entries * R;
    out.h.domain = out.h.codomain = Space::nodes;
    return out;
}

MetricPipeline run_metric_pipeline(const TransformationFunction& u, const HalfLineGrid& grid) {
    const Superpotential w = superpotential_from_u(u, grid);
    const cplx alpha = u.params.alpha;
    OperatorMatrix eta = assemble_eta_matrix(w, grid);
    OperatorMatrix H = assemble_H_matrix(w, alpha, grid);
    MetricSqrt rho = hermitian_sqrt(eta);
    EquivalentH sim = equivalent_h(rho, H);
    MetricPipeline p{std::move(eta), std::move(H), assemble_h0_matrix(w, alpha, grid),
                     discretize_ladder(make_ladder(Flavor::L_star, w), grid), std::move(rho), std::move(sim),
                     0.0, false};
    const ResolventH r = h_via_resolvent(p.rho, p.L_star, p.h0, alpha);
    p.resolvent_error = relative_difference(r.h.entries, p.similarity.h.entries);
    p.lhospital = r.lhospital;
    return p;
}

ProbeReport spectral_singularity_probe(double b, const std::vector<double>& d_sequence, double x_max,
                                       std::size_t n) {
    for (std::size_t i = 0; i < d_sequence.size(); ++i) {
        if (!(d_sequence[i] < 0.0)) throw InvalidParams("probe values of d must be negative");
        if (i > 0 && !(std::abs(d_sequence[i]) < std::abs(d_sequence[i - 1])))
            throw InvalidParams("probe values of d must approach 0 from below");
    }
    const HalfLineGrid grid(x_max, n);
    const double gap = std::numbers::pi / x_max;
    ProbeReport rep;
    rep.b = b;
    for (double d : d_sequence) {
        const TransformationFunction u = catalogue("constant", CatalogueParams{d, b, 1.0, 1.0});
        const MetricPipeline p = run_metric_pipeline(u, grid);
        ProbeRow row;
        row.d = d;
        row.cond_rho = p.rho.condition_number;
        row.r_h = p.similarity.r_h;
        row.resolvent_error = p.resolvent_error;
        row.r_h_resolved = windowed_hermiticity(p.similarity.h, p.rho, 4.0 + d * d);
        row.near_singular = d * d < gap * gap || row.cond_rho > 1e6;
        rep.rows.push_back(row);
    }
    rep.cond_monotone = rep.r_h_monotone = rep.resolvent_monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto &a = rep.rows[i - 1], &c = rep.rows[i];
        rep.cond_monotone = rep.cond_monotone && c.cond_rho > a.cond_rho;
        rep.r_h_monotone = rep.r_h_monotone && c.r_h > a.r_h;
        rep.resolvent_monotone = rep.resolvent_monotone && c.resolvent_error >= a.resolvent_error;
    }
    return rep;
}

}  // namespace susyeta
