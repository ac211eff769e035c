#include "susyeta/spectral.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "susyeta/errors.hpp"

namespace susyeta {

namespace {

constexpr cplx I(0.0, 1.0);
const double kAmp = std::sqrt(2.0 / std::numbers::pi);

ScatteringState make_state(std::string name, double k, cplx lambda, GridFunction v, GridFunction dv,
                           Normalization norm, std::optional<Fn> fn) {
    return ScatteringState{std::move(name), k, lambda, std::move(v), std::move(dv), norm, std::move(fn)};
}

ScatteringState from_fn(std::string name, double k, cplx lambda, const Fn& f, const HalfLineGrid& grid) {
    return make_state(std::move(name), k, lambda, sample(f, grid), sample_derivative(f, 1, grid),
                      Normalization::delta_normalized, f);
}

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::eta0_bar: return "eta0_bar";
        case StateKind::eta_bar: return "eta_bar";
        case StateKind::eta: return "eta";
        case StateKind::h0: return "h0";
        case StateKind::H: return "H";
    }
    return "?";
}

StateKind state_kind_from_string(const std::string& s) {
    for (auto k : {StateKind::eta0_bar, StateKind::eta_bar, StateKind::eta, StateKind::h0, StateKind::H})
        if (to_string(k) == s) return k;
    throw InvalidParams("unknown state kind '" + s + "'");
}

ScatteringState analytic_states_constant(StateKind kind, double k, const TransformationFunction& u,
                                         const HalfLineGrid& grid) {
    if (u.name != "constant")
        throw WrongEntry("closed-form states exist for the constant entry only, got '" + u.name + "'");
    const double d = u.params.d, b = u.params.b;
    const cplx s = u.params.s(), alpha = u.params.alpha;
    const double lam_eta = k * k + d * d;
    switch (kind) {
        case StateKind::eta0_bar:
        case StateKind::h0: {
            Fn f = [k](double x) { return kAmp * sin(k * Jet::variable(x)); };
            const double lam = kind == StateKind::h0 ? k * k : lam_eta;
            return from_fn(to_string(kind), k, lam, f, grid);
        }
        case StateKind::eta_bar:
        case StateKind::eta: {
            const double norm = kAmp / std::sqrt(lam_eta);
            const double phase = kind == StateKind::eta ? b : 0.0;
            Fn f = [k, d, norm, phase](double x) {
                const Jet X = Jet::variable(x);
                const Jet bar = norm * (d * sin(k * X) - k * cos(k * X));
                return exp(-I * phase * X) * bar;
            };
            return from_fn(to_string(kind), k, lam_eta, f, grid);
        }
        case StateKind::H: {
            const cplx norm = kAmp / std::sqrt(k * k - alpha);
            Fn f = [k, s, norm](double x) {
                const Jet X = Jet::variable(x);
                return norm * (s * sin(k * X) - k * cos(k * X));
            };
            return from_fn(to_string(kind), k, k * k, f, grid);
        }
    }
    throw InvalidParams("unknown state kind");
}

ScatteringState darboux_map_forward(const ScatteringState& st, const TransformationFunction& u) {
    const cplx lam = st.eigenvalue;
    if (std::abs(lam) < 1e-14) throw ZeroMode("lambda(k) = 0 is not in the spectrum of eta_bar");
    const cplx f = 1.0 / std::sqrt(lam);
    const auto& grid = st.values.grid;
    Eigen::VectorXcd v(st.values.values.size()), dv(v.size());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const Jet W = u.log_rho(grid.node(j)).derivative().real();
        const cplx w0 = W.value(), w1 = W.deriv(1);
        const cplx p = st.values[j], dp = st.derivs[j];
        const cplx ddp = (w0 * w0 + w1 - lam) * p;  // η̄₀ potential is W² + W'
        v[Eigen::Index(j)] = f * (-dp + w0 * p);
        dv[Eigen::Index(j)] = f * (-ddp + w1 * p + w0 * dp);
    }
    std::optional<Fn> fn;
    if (st.analytic) {
        fn = [f, psi = *st.analytic, u](double x) {
            const Jet p = psi(x);
            return f * (-p.derivative() + u.log_rho(x).derivative().real() * p);
        };
    }
    return make_state("eta_bar", st.k, lam, GridFunction(grid, std::move(v)), GridFunction(grid, std::move(dv)),
                      st.normalization, fn);
}

ScatteringState darboux_map_backward(const ScatteringState& st, const TransformationFunction& u) {
    const cplx lam = st.eigenvalue;
    if (std::abs(lam) < 1e-14) throw ZeroMode("lambda(k) = 0 is not in the spectrum of eta0_bar");
    const cplx f = 1.0 / std::sqrt(lam);
    const auto& grid = st.values.grid;
    Eigen::VectorXcd v(st.values.values.size()), dv(v.size());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const Jet W = u.log_rho(grid.node(j)).derivative().real();
        const cplx w0 = W.value(), w1 = W.deriv(1);
        const cplx p = st.values[j], dp = st.derivs[j];
        const cplx ddp = (w0 * w0 - w1 - lam) * p;  // η̄ potential is W² − W'
        v[Eigen::Index(j)] = f * (dp + w0 * p);
        dv[Eigen::Index(j)] = f * (ddp + w1 * p + w0 * dp);
    }
    std::optional<Fn> fn;
    if (st.analytic) {
        fn = [f, psi = *st.analytic, u](double x) {
            const Jet p = psi(x);
            return f * (p.derivative() + u.log_rho(x).derivative().real() * p);
        };
    }
    return make_state("eta0_bar", st.k, lam, GridFunction(grid, std::move(v)), GridFunction(grid, std::move(dv)),
                      st.normalization, fn);
}

ScatteringState phase_map(const ScatteringState& st, const Fn& omega) {
    const auto& grid = st.values.grid;
    Eigen::VectorXcd v(st.values.values.size()), dv(v.size());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const Jet om = omega(grid.node(j));
        const cplx e = std::exp(-I * om.value());
        const cplx p = st.values[j], dp = st.derivs[j];
        v[Eigen::Index(j)] = e * p;
        dv[Eigen::Index(j)] = e * (dp - I * om.deriv(1) * p);
    }
    std::optional<Fn> fn;
    if (st.analytic) fn = [psi = *st.analytic, omega](double x) { return exp(-I * omega(x)) * psi(x); };
    std::string name = st.op_name == "eta_bar" ? "eta" : st.op_name + "_phase";
    return make_state(std::move(name), st.k, st.eigenvalue, GridFunction(grid, std::move(v)),
                      GridFunction(grid, std::move(dv)), st.normalization, fn);
}

ScatteringState solve_scattering(const SchrodingerOperator& op, double k, const HalfLineGrid& grid) {
    const std::size_t n = grid.n();
    const double X = grid.x_max();
    for (std::size_t j = 0; j < n; j += std::max<std::size_t>(1, n / 16)) {
        const double x = grid.node(j);
        if (std::abs(op.drift(x).value()) != 0.0 || std::abs(op.potential(x).value().imag()) > 1e-12)
            throw InvalidParams("solve_scattering handles real operators without drift, got '" + op.name + "'");
    }
    if (op.boundary.kind == BoundaryCondition::Kind::robin && op.boundary.c.imag() != 0.0)
        throw InvalidParams("solve_scattering needs a real robin coefficient");

    auto V = [&](double x) { return (op.potential(x).value() + op.constant_shift).real(); };
    const double v_inf = V(X);
    const std::size_t tail_start = std::size_t(std::floor(0.9 * double(n - 1)));
    double drift = 0.0;
    for (std::size_t j = tail_start; j < n; ++j) drift = std::max(drift, std::abs(V(grid.node(j)) - v_inf));
    if (drift > 1e-6 * std::max(1.0, std::abs(v_inf))) {
        std::ostringstream os;
        os << "potential of '" << op.name << "' varies by " << drift << " over the last 10% of [0, X]";
        throw NoDecay(os.str());
    }
    const double lambda = k * k + v_inf;

    using State = std::array<double, 4>;  // (ψ₁, ψ₁', ψ₂, ψ₂')
    auto rhs = [&](const State& y, State& dy, double x) {
        const double q = V(x) - lambda;
        dy[0] = y[1];
        dy[1] = q * y[0];
        dy[2] = y[3];
        dy[3] = q * y[2];
    };
    State y = {std::sin(k * X), k * std::cos(k * X), std::cos(k * X), -k * std::sin(k * X)};
    std::vector<double> times(grid.nodes().rbegin(), grid.nodes().rend());
    std::vector<State> out(n);
    std::size_t count = 0;
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), -grid.h() / 4,
                         [&](const State& s, double) { out[n - 1 - count++] = s; });

    const State& at0 = out[0];
    double m1, m2;
    if (op.boundary.kind == BoundaryCondition::Kind::dirichlet) {
        m1 = at0[0];
        m2 = at0[2];
    } else {
        const double c = op.boundary.c.real();
        m1 = at0[1] + c * at0[0];
        m2 = at0[3] + c * at0[2];
    }
    const double mn = std::hypot(m1, m2);
    const double scale = std::max({std::abs(at0[0]), std::abs(at0[1]), std::abs(at0[2]), std::abs(at0[3]), 1.0});
    if (mn < 1e-13 * scale) throw MatchFailure("both tail solutions satisfy the boundary row at x = 0");
    double A = m2 / mn, B = -m1 / mn;
    // phase in (−π, 0]; a B at rounding level counts as zero
    if (std::abs(B) <= 1e-12) B = 0.0;
    if (B > 0.0 || (B == 0.0 && A < 0.0)) {
        A = -A;
        B = -B;
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n)), dv(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        v[Eigen::Index(j)] = kAmp * (A * out[j][0] + B * out[j][2]);
        dv[Eigen::Index(j)] = kAmp * (A * out[j][1] + B * out[j][3]);
    }
    return make_state(op.name, k, lambda, GridFunction(grid, std::move(v)), GridFunction(grid, std::move(dv)),
                      Normalization::delta_normalized, std::nullopt);
}

double eigen_residual(const SchrodingerOperator& op, const ScatteringState& st) {
    const auto& grid = st.values.grid;
    const std::size_t n = grid.n();
    const double scale = max_abs(st.values.values);
    double worst = 0.0;
    if (st.analytic) {
        const Fn img = apply(op, *st.analytic);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double x = grid.node(j);
            worst = std::max(worst, std::abs(img(x).value() - st.eigenvalue * (*st.analytic)(x).value()));
        }
        return worst / scale;
    }
    const GridFunction d2 = derivative(st.values, 2);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double x = grid.node(j);
        const cplx r = -d2[j] + op.drift(x).value() * st.derivs[j] +
                       (op.potential(x).value() + op.constant_shift - st.eigenvalue) * st.values[j];
        worst = std::max(worst, std::abs(r));
    }
    return worst / scale;
}

double state_boundary_residual(const BoundaryCondition& bc, const ScatteringState& st) {
    const double scale = max_abs(st.values.values);
    if (bc.kind == BoundaryCondition::Kind::dirichlet) return std::abs(st.values[0]) / scale;
    return std::abs(st.derivs[0] + bc.c * st.values[0]) / scale;
}

PacketGram packet_gram(const std::function<ScatteringState(double)>& state_at,
                       const std::vector<double>& centers, double width, const HalfLineGrid& grid,
                       std::size_t nodes_per_packet) {
    if (nodes_per_packet % 2 == 0) ++nodes_per_packet;
    const std::size_t m = centers.size();
    std::vector<Eigen::VectorXcd> packets;
    for (double c : centers) {
        const double lo = std::max(0.0, c - 6.0 * width), hi = c + 6.0 * width;
        const double dk = (hi - lo) / double(nodes_per_packet - 1);
        Eigen::VectorXcd p = Eigen::VectorXcd::Zero(Eigen::Index(grid.n()));
        for (std::size_t i = 0; i < nodes_per_packet; ++i) {
            const double k = lo + double(i) * dk;
            const double simpson = (i == 0 || i + 1 == nodes_per_packet) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const double g = std::exp(-(k - c) * (k - c) / (2.0 * width * width));
            p += (simpson * dk / 3.0 * g) * state_at(k).values.values;
        }
        packets.push_back(std::move(p));
    }
    PacketGram out;
    out.gram.resize(Eigen::Index(m), Eigen::Index(m));
    out.reference.resize(Eigen::Index(m), Eigen::Index(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            out.gram(Eigen::Index(i), Eigen::Index(j)) =
                inner_product(GridFunction(grid, packets[i]), GridFunction(grid, packets[j]));
            const double dc = centers[i] - centers[j];
            out.reference(Eigen::Index(i), Eigen::Index(j)) =
                std::sqrt(std::numbers::pi) * width * std::exp(-dc * dc / (4.0 * width * width));
        }
    return out;
}

double inverse_rho_norm(const TransformationFunction& u, double x_max, std::size_t n) {
    const HalfLineGrid grid(x_max, n);
    const std::function<cplx(double)> inv = [&](double x) { return cplx(std::exp(-u.log_rho(x).value().real())); };
    const GridFunction f = sample(inv, grid);
    return norm(f);
}

}  // namespace susyeta
