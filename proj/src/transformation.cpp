#include "susyeta/transformation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <memory>
#include <sstream>

#include "susyeta/errors.hpp"

namespace susyeta {

namespace {
using GL = boost::math::quadrature::gauss<double, 20>;
constexpr cplx I(0.0, 1.0);
}  // namespace

AsymptoticParams AsymptoticParams::unchecked(double d, double b) {
    AsymptoticParams p;
    p.d = d;
    p.b = b;
    p.beta = b * b - d * d;
    p.gamma = -2.0 * d * b;
    p.alpha = -(cplx(d, b) * cplx(d, b));
    return p;
}

AsymptoticParams AsymptoticParams::make(double d, double b) {
    if (!std::isfinite(d) || !std::isfinite(b)) throw InvalidParams("d and b must be finite");
    if (!(d < 0.0)) {
        std::ostringstream os;
        os << "d must be negative (broken supersymmetry), got d = " << d;
        throw InvalidParams(os.str());
    }
    return unchecked(d, b);
}

Jet TransformationFunction::log_rho(double x) const {
    return params.d * Jet::variable(x) + log_rho_excess(x);
}
Jet TransformationFunction::omega(double x) const {
    return params.b * Jet::variable(x) + omega_excess(x);
}
Jet TransformationFunction::log_u(double x) const {
    if (log_u_excess) return params.s() * Jet::variable(x) + log_u_excess(x);
    return log_rho(x) + I * omega(x);
}

Fn TransformationFunction::log_rho_fn() const {
    return [self = *this](double x) { return self.log_rho(x); };
}
Fn TransformationFunction::omega_fn() const {
    return [self = *this](double x) { return self.omega(x); };
}
Fn TransformationFunction::rho_fn() const {
    return [self = *this](double x) { return self.rho(x); };
}
Fn TransformationFunction::u_fn() const {
    return [self = *this](double x) { return self.u(x); };
}

Superpotential superpotential_from_u(const TransformationFunction& u, const HalfLineGrid& grid) {
    for (double x : grid.nodes()) {
        const double lr = u.log_rho(x).value().real();
        if (!std::isfinite(lr)) {
            std::ostringstream os;
            os << "rho vanishes or blows up at x = " << x;
            throw PoleDetected(os.str());
        }
    }
    Superpotential s;
    s.W = [u](double x) { return u.log_rho(x).derivative().real(); };
    s.W_minus_d = [u](double x) { return u.log_rho_excess(x).derivative().real(); };
    s.w = [u](double x) { return u.log_u(x).derivative(); };
    return s;
}

TailReport check_tail(const TransformationFunction& u, const HalfLineGrid& grid) {
    const std::size_t n = grid.n();
    const std::size_t start = std::size_t(std::floor(0.9 * double(n - 1)));
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = start; j < n; ++j) {
        const double v = u.log_rho_excess(grid.node(j)).value().real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    TailReport r;
    r.rho_drift = hi - lo;
    r.omega_mismatch = std::abs(u.omega(grid.x_max()).deriv(1).real() - u.params.b);
    return r;
}

namespace {

struct PhaseState {
    Fn log_rho;
    double gamma = 0.0;
    double h = 0.0;
    std::vector<double> x, lr, S, om;

    double lrv(double t) const { return log_rho(t).value().real(); }

    // S(t) = ∫_t^∞ ρ²(s)/ρ²(t) ds, so that ω'(t) = γ S(t)
    double S_at(std::size_t j, double t) const {
        const double base = lrv(t);
        const double inner = GL::integrate(
            [&](double s) { return std::exp(2.0 * (lrv(s) - base)); }, t, x[j + 1]);
        return S[j + 1] * std::exp(2.0 * (lr[j + 1] - base)) + inner;
    }

    std::size_t interval(double t) const {
        const double f = std::floor(t / h);
        if (f <= 0.0) return 0;
        return std::min<std::size_t>(std::size_t(f), x.size() - 2);
    }

    Jet eval(double t) const {
        const std::size_t n = x.size();
        double om_t, dom_t;
        const double jr = std::round(t / h);
        if (jr >= 0.0 && jr < double(n) && std::abs(t - x[std::size_t(jr)]) <= 1e-12 * h) {
            const std::size_t j = std::size_t(jr);
            om_t = om[j];
            dom_t = gamma * S[j];
        } else {
            const std::size_t j = interval(t);
            dom_t = gamma * S_at(j, t);
            om_t = om[j] + GL::integrate([&](double s) { return gamma * S_at(j, s); }, x[j], t);
        }
        // Taylor coefficients of y = ω' from y' = −2W y − γ
        const Jet W = log_rho(t).derivative().real();
        Jet y;
        y[0] = dom_t;
        for (std::size_t k = 0; k + 1 < Jet::N; ++k) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i <= k; ++i) acc += W[i] * y[k - i];
            acc *= -2.0;
            if (k == 0) acc -= gamma;
            y[k + 1] = acc / double(k + 1);
        }
        Jet omega;
        omega[0] = om_t;
        for (std::size_t k = 0; k + 1 < Jet::N; ++k) omega[k + 1] = y[k] / double(k + 1);
        return omega;
    }
};

}  // namespace

PhaseSolution solve_phase(const Fn& log_rho, const AsymptoticParams& params,
                          const HalfLineGrid& grid, double tail_tol) {
    auto st = std::make_shared<PhaseState>();
    st->log_rho = log_rho;
    st->gamma = params.gamma;
    st->h = grid.h();
    st->x = grid.nodes();
    const std::size_t n = grid.n();
    st->lr.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        st->lr[j] = st->lrv(st->x[j]);
        if (!std::isfinite(st->lr[j])) {
            std::ostringstream os;
            os << "rho vanishes or blows up at x = " << st->x[j];
            throw PoleDetected(os.str());
        }
    }
    const double WX = log_rho(grid.x_max()).derivative().value().real();
    if (!(WX < 0.0)) {
        std::ostringstream os;
        os << "rho'/rho = " << WX << " at X; the tail is not decaying";
        throw TailMismatch(os.str());
    }
    st->S.assign(n, 0.0);
    st->S[n - 1] = 1.0 / (-2.0 * WX);
    for (std::size_t j = n - 1; j-- > 0;) {
        const double base = st->lr[j];
        const double inner = GL::integrate(
            [&](double s) { return std::exp(2.0 * (st->lrv(s) - base)); }, st->x[j], st->x[j + 1]);
        st->S[j] = st->S[j + 1] * std::exp(2.0 * (st->lr[j + 1] - base)) + inner;
    }

    PhaseSolution sol;
    sol.tail_mismatch = std::abs(params.gamma * st->S[n - 1] - params.b);
    if (sol.tail_mismatch > tail_tol) {
        std::ostringstream os;
        os << "omega'(X) misses b by " << sol.tail_mismatch << " (tolerance " << tail_tol
           << "); increase X";
        throw TailMismatch(os.str());
    }

    st->om.assign(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double step = GL::integrate(
            [&](double s) { return params.gamma * st->S_at(j, s); }, st->x[j], st->x[j + 1]);
        st->om[j + 1] = st->om[j] + step;
    }

    sol.omega_nodes = Eigen::Map<const Eigen::VectorXd>(st->om.data(), Eigen::Index(n));
    sol.omega_prime_nodes.resize(Eigen::Index(n));
    for (std::size_t j = 0; j < n; ++j) sol.omega_prime_nodes[Eigen::Index(j)] = params.gamma * st->S[j];
    sol.omega = [st](double t) { return st->eval(t); };
    return sol;
}

double phase_ode_residual(const Fn& omega, const Fn& log_rho, double gamma,
                          const HalfLineGrid& grid) {
    const double delta = std::min(1e-3, grid.h() / 4.0);
    auto dom = [&](double t) { return omega(t).deriv(1).real(); };
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < grid.n(); ++j) {
        const double x = grid.node(j);
        const double d2 = (-dom(x + 2 * delta) + 8 * dom(x + delta) - 8 * dom(x - delta) +
                           dom(x - 2 * delta)) /
                          (12 * delta);
        const double W = log_rho(x).deriv(1).real();
        worst = std::max(worst, std::abs(d2 + 2 * W * dom(x) + gamma));
    }
    return worst;
}

ScatteringDiagnostic check_scattering_condition(const std::function<cplx(double)>& V,
                                                const HalfLineGrid& grid) {
    const std::size_t n = grid.n();
    ScatteringDiagnostic out;
    const auto& w = grid.weights();
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j);
        out.integral += w[Eigen::Index(j)] * (1.0 + x) * std::abs(V(x));
    }
    // least-squares slope of log|V| over the tail, skipping exact zeros
    const std::size_t start = std::size_t(std::floor(0.9 * double(n - 1)));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t j = start; j < n; ++j) {
        const double x = grid.node(j);
        const double a = std::abs(V(x));
        if (a == 0.0) continue;
        const double y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) {
        out.tail_rate = -std::numeric_limits<double>::infinity();
        out.decays = true;
    } else {
        const double denom = double(m) * sxx - sx * sx;
        out.tail_rate = (double(m) * sxy - sx * sy) / denom;
        out.decays = out.tail_rate < -1e-3;
    }
    out.scattering = out.decays && std::isfinite(out.integral);
    return out;
}

std::string canonical_entry_name(const std::string& name) {
    if (name == "constant") return name;
    if (name == "poschl_teller" || name == "poschl-teller") return "poschl_teller";
    throw UnknownEntry("no catalogue entry named '" + name + "'");
}

TransformationFunction catalogue(const std::string& raw_name, const CatalogueParams& p) {
    const std::string name = canonical_entry_name(raw_name);
    TransformationFunction t;
    t.name = name;
    t.params = AsymptoticParams::make(p.d, p.b);
    if (name == "constant") {
        t.log_rho_excess = constant_fn(0.0);
        t.omega_excess = constant_fn(0.0);
        return t;
    }
    if (!(p.a > 0.0) || !(p.c > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.c)) {
        std::ostringstream os;
        os << "poschl_teller needs a > 0 and c > 0, got a = " << p.a << ", c = " << p.c;
        throw InvalidParams(os.str());
    }
    // u e^{-(d+ib)x} = g/(a−s) with g = a tanh(ax+c) − s.  Write
    // g/(a−s) = 1 − a q/(a−s), q = 1 − tanh(ax+c) = 2e^{−2z}/(1+e^{−2z}),
    // and take log1p so the tail excess keeps full relative precision.
    const double a = p.a, c = p.c;
    const cplx s(p.d, p.b);
    const cplx k = a / (a - s);
    auto excess = [a, c, k](double x) {
        const Jet z = a * Jet::variable(x) + c;
        const Jet e = exp(-2.0 * z);
        const Jet q = 2.0 * e / (1.0 + e);
        return log1p(-k * q);
    };
    t.log_rho_excess = [excess](double x) { return excess(x).real(); };
    t.omega_excess = [excess](double x) { return excess(x).imag(); };
    t.log_u_excess = excess;
    // With E = e^{−2z} and m = 1 − 2k, w − s = 4akE/P, P = (1+mE)(1+E), and
    // V̄ − d² = (Re f)² + Re[8akE·N/P²] with N = (a+d) + d(m+1)E + m(d−a)E².
    // At a = −d the constant term of N is zero symbolically, so the
    // e^{−4ax} tail survives instead of drowning in rounding.
    const double d = p.d;
    const cplx m = 1.0 - 2.0 * k;
    t.vbar_excess = [a, c, d, k, m](double x) {
        const Jet E = exp(-2.0 * (a * Jet::variable(x) + c));
        const Jet P = (1.0 + m * E) * (1.0 + E);
        const Jet f = 4.0 * a * k * E / P;
        const Jet N = (a + d) + d * (m + 1.0) * E + m * (d - a) * E * E;
        const Jet re = f.real();
        return re * re + (8.0 * a * k * E * N / (P * P)).real();
    };
    return t;
}

}  // namespace susyeta
