#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "susyeta/config.hpp"
#include "susyeta/errors.hpp"
#include "susyeta/metric_linalg.hpp"
#include "susyeta/spectral.hpp"
#include "susyeta/verify.hpp"

namespace py = pybind11;
using namespace susyeta;

namespace {

py::dict check_dict(const CheckResult& r) {
    py::dict d;
    d["check"] = r.name;
    d["residual"] = r.residual;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.passed;
    d["negative_control"] = r.negative_control;
    d["ok"] = outcome_ok(r);
    return d;
}

CatalogueParams params(double d, double b, double a, double c) { return {d, b, a, c}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "metric operators from a complex transformation function";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
#define SUSYETA_PY_ERROR(Name) py::register_exception<Name>(m, #Name, base.ptr());
    SUSYETA_PY_ERROR(NonFiniteSample)
    SUSYETA_PY_ERROR(GridMismatch)
    SUSYETA_PY_ERROR(GridTooSmall)
    SUSYETA_PY_ERROR(PoleDetected)
    SUSYETA_PY_ERROR(TailMismatch)
    SUSYETA_PY_ERROR(UnknownEntry)
    SUSYETA_PY_ERROR(InvalidParams)
    SUSYETA_PY_ERROR(NotReal)
    SUSYETA_PY_ERROR(WrongEntry)
    SUSYETA_PY_ERROR(ZeroMode)
    SUSYETA_PY_ERROR(NoDecay)
    SUSYETA_PY_ERROR(MatchFailure)
    SUSYETA_PY_ERROR(KernelDetected)
    SUSYETA_PY_ERROR(NotPositiveDefinite)
    SUSYETA_PY_ERROR(AlphaOnSpectrum)
    SUSYETA_PY_ERROR(ConfigError)
#undef SUSYETA_PY_ERROR

    m.def(
        "nodes",
        [](double x_max, std::size_t n) {
            const HalfLineGrid g(x_max, n);
            return Eigen::Map<const Eigen::VectorXd>(g.nodes().data(), Eigen::Index(g.n())).eval();
        },
        py::arg("x_max"), py::arg("n"));

    m.def(
        "alpha",
        [](double d, double b) { return AsymptoticParams::make(d, b).alpha; }, py::arg("d"), py::arg("b"));

    // w, W and the η̄ potential on the grid nodes
    m.def(
        "coefficients",
        [](const std::string& entry, double d, double b, double a, double c, double x_max, std::size_t n) {
            const HalfLineGrid g(x_max, n);
            const auto u = catalogue(entry, params(d, b, a, c));
            const auto w = superpotential_from_u(u, g);
            const auto eb = build_eta_bar(u, g);
            Eigen::VectorXcd wv(Eigen::Index(g.n()));
            Eigen::VectorXd Wv(Eigen::Index(g.n())), vbar(Eigen::Index(g.n()));
            for (std::size_t j = 0; j < g.n(); ++j) {
                const double x = g.node(j);
                const auto i = Eigen::Index(j);
                wv[i] = w.w(x).value();
                Wv[i] = w.W(x).value().real();
                vbar[i] = eb.potential(x).value().real();
            }
            py::dict out;
            out["x"] = Eigen::Map<const Eigen::VectorXd>(g.nodes().data(), Eigen::Index(g.n())).eval();
            out["w"] = wv;
            out["W"] = Wv;
            out["vbar"] = vbar;
            return out;
        },
        py::arg("entry"), py::arg("d"), py::arg("b"), py::arg("a") = 1.0, py::arg("c") = 1.0,
        py::arg("x_max") = 20.0, py::arg("n") = 401);

    m.def(
        "constant_state",
        [](const std::string& kind, double k, double d, double b, double x_max, std::size_t n) {
            const HalfLineGrid g(x_max, n);
            const auto st =
                analytic_states_constant(state_kind_from_string(kind), k, catalogue("constant", {d, b, 1, 1}), g);
            return py::make_tuple(st.eigenvalue, st.values.values);
        },
        py::arg("kind"), py::arg("k"), py::arg("d"), py::arg("b"), py::arg("x_max") = 20.0, py::arg("n") = 401);

    m.def(
        "run_suite",
        [](const std::string& entry, double d, double b, double a, double c, std::size_t n, double x_max,
           std::uint64_t seed, std::size_t n_tests, bool spectral, bool metric) {
            SuiteOptions o;
            o.seed = seed;
            o.n_tests = n_tests;
            o.spectral = spectral;
            o.metric = metric;
            std::vector<CheckResult> rs;
            {
                py::gil_scoped_release release;
                rs = run_suite(canonical_entry_name(entry), params(d, b, a, c), HalfLineGrid(x_max, n), o);
            }
            py::list out;
            for (const auto& r : rs) out.append(check_dict(r));
            return out;
        },
        py::arg("entry"), py::arg("d"), py::arg("b"), py::arg("a") = 1.0, py::arg("c") = 1.0, py::arg("n") = 401,
        py::arg("x_max") = 20.0, py::arg("seed") = 20240917, py::arg("n_tests") = 20, py::arg("spectral") = true,
        py::arg("metric") = true);

    m.def(
        "metric_pipeline",
        [](const std::string& entry, double d, double b, double a, double c, std::size_t n, double x_max) {
            const HalfLineGrid g(x_max, n);
            const auto p = run_metric_pipeline(catalogue(entry, params(d, b, a, c)), g);
            py::dict out;
            out["r_h"] = p.similarity.r_h;
            out["second_equality"] = p.similarity.second_equality;
            out["resolvent_error"] = p.resolvent_error;
            out["lhospital"] = p.lhospital;
            out["cond_rho"] = p.rho.condition_number;
            out["eigen_floor"] = p.rho.eigen_floor;
            out["eta_eigenvalues"] = p.rho.eigenvalues;
            out["h"] = p.similarity.h.entries;
            return out;
        },
        py::arg("entry"), py::arg("d"), py::arg("b"), py::arg("a") = 1.0, py::arg("c") = 1.0, py::arg("n") = 401,
        py::arg("x_max") = 20.0);

    m.def(
        "probe",
        [](double b, const std::vector<double>& d_sequence, double x_max, std::size_t n) {
            const auto rep = spectral_singularity_probe(b, d_sequence, x_max, n);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict row;
                row["d"] = r.d;
                row["cond_rho"] = r.cond_rho;
                row["r_h"] = r.r_h;
                row["resolvent_error"] = r.resolvent_error;
                row["r_h_resolved"] = r.r_h_resolved;
                row["near_singular"] = r.near_singular;
                rows.append(row);
            }
            py::dict out;
            out["rows"] = rows;
            out["cond_monotone"] = rep.cond_monotone;
            out["r_h_monotone"] = rep.r_h_monotone;
            out["resolvent_monotone"] = rep.resolvent_monotone;
            return out;
        },
        py::arg("b"), py::arg("d_sequence"), py::arg("x_max") = 20.0, py::arg("n") = 401);

    m.def(
        "parse_config",
        [](const std::string& text) {
            const auto c = parse_config(text);
            py::dict out;
            out["entry"] = c.entry;
            out["d"] = c.params.d;
            out["b"] = c.params.b;
            out["n"] = c.n;
            out["x_max"] = c.x_max;
            out["format"] = c.format;
            out["tolerances"] = c.tolerance_overrides;
            return out;
        },
        py::arg("text"));
}
