// Python bindings for the pcosync core: PRF evaluation and validation,
// topology/spectral helpers, both simulators, rate bounds and the Monte
// Carlo sweep driver. Report-style results cross the boundary as JSON
// strings; the Python package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "pcosync/analysis.hpp"
#include "pcosync/dynamics.hpp"
#include "pcosync/experiments.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/pulse_sim.hpp"
#include "pcosync/scenario.hpp"
#include "pcosync/topology.hpp"

namespace py = pybind11;
using namespace pcosync;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw std::invalid_argument("matrix rows must have equal length");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_pcosync, m) {
    m.doc() = "pulse-coupled oscillator synchronization toolkit (C++ core)";

    py::class_<PhaseResponseFunction>(m, "PhaseResponseFunction")
        .def_static("tanh_family", &PhaseResponseFunction::tanh_family, py::arg("epsilon"))
        .def_static("sine", &PhaseResponseFunction::sine, py::arg("amplitude"))
        .def_static("custom", &PhaseResponseFunction::custom, py::arg("table"))
        .def_static("from_csv", &PhaseResponseFunction::from_csv, py::arg("path"))
        .def("__call__", [](const PhaseResponseFunction& q, double x) { return q(x); }, py::arg("x"))
        .def("slope_at_zero", &PhaseResponseFunction::slope_at_zero)
        .def("describe", &PhaseResponseFunction::describe)
        .def("__repr__", [](const PhaseResponseFunction& q) { return "<PRF " + q.describe() + ">"; });

    m.def(
        "validate_admissibility",
        [](const PhaseResponseFunction& prf, int grid_points) {
            const auto rep = validate_admissibility(prf, grid_points);
            py::dict d;
            d["passed"] = rep.passed;
            d["zero_ok"] = rep.zero_ok;
            d["odd_ok"] = rep.odd_ok;
            d["sign_ok"] = rep.sign_ok;
            d["grid_points"] = rep.grid_points;
            d["tolerance"] = rep.tolerance;
            d["odd_violations"] = rep.odd_violations;
            d["sign_violations"] = rep.sign_violations;
            return d;
        },
        py::arg("prf"), py::arg("grid_points") = 10000);

    py::class_<PrfBounds>(m, "PrfBounds")
        .def_readonly("eps_bar", &PrfBounds::eps_bar)
        .def_readonly("sigma1", &PrfBounds::sigma1)
        .def_readonly("sigma2", &PrfBounds::sigma2)
        .def_readonly("sigma3", &PrfBounds::sigma3)
        .def_readonly("sigma4", &PrfBounds::sigma4)
        .def_readonly("gamma1", &PrfBounds::gamma1)
        .def_readonly("gamma2", &PrfBounds::gamma2);

    m.def("compute_bounds", &compute_bounds, py::arg("qg"), py::arg("ql"), py::arg("eps_bar"),
          py::arg("grid_points") = 10000);

    m.def(
        "verify_tanh_rate_monotonicity",
        [](const std::vector<double>& eps_values, int x_grid) {
            const auto rep = verify_tanh_rate_monotonicity(eps_values, x_grid);
            py::dict d;
            d["passed"] = rep.passed;
            d["f_violations"] = rep.f_violations.size();
            d["ratio_violations"] = rep.ratio_violations.size();
            d["ratio_strict_min"] = rep.ratio_strict_min;
            return d;
        },
        py::arg("eps_values"), py::arg("x_grid") = 10000);

    py::class_<Topology>(m, "Topology")
        .def(py::init<int, const std::vector<std::pair<int, int>>&, std::vector<double>, double, double,
                      std::vector<double>>(),
             py::arg("n"), py::arg("edges"), py::arg("global_gains"), py::arg("local_strength"),
             py::arg("period"), py::arg("natural_freq_offsets") = std::vector<double>{})
        .def_static("desk18", &Topology::desk18)
        .def_static("from_json_file", &Topology::from_json_file, py::arg("path"))
        .def_static("from_json",
                    [](const std::string& text) { return Topology::from_json(nlohmann::json::parse(text)); },
                    py::arg("json_text"))
        .def("to_json", [](const Topology& t) { return t.to_json().dump(); })
        .def_property_readonly("n", &Topology::n)
        .def_property_readonly("edges", &Topology::edges)
        .def_property_readonly("global_gains", &Topology::global_gains)
        .def_property_readonly("local_strength", &Topology::local_strength)
        .def_property_readonly("period", &Topology::period)
        .def("degree", &Topology::degree, py::arg("i"))
        .def("with_gains", &Topology::with_gains, py::arg("gains"))
        .def("with_uniform_gain", &Topology::with_uniform_gain, py::arg("g"))
        .def("with_local_strength", &Topology::with_local_strength, py::arg("l"))
        .def("advisories", &Topology::advisories)
        .def("__repr__", [](const Topology& t) {
            std::ostringstream ss;
            ss << "<Topology n=" << t.n() << " edges=" << t.edge_count() << ">";
            return ss.str();
        });

    m.def("incidence_matrix", [](const Topology& t) { return matrix_rows(incidence_matrix(t)); });
    m.def("laplacian", [](const Topology& t) { return matrix_rows(laplacian(t)); });
    m.def("is_connected", &is_connected);

    m.def(
        "symmetric_eigen",
        [](const std::vector<std::vector<double>>& rows, bool with_vectors) {
            const auto res = symmetric_eigen(matrix_from_rows(rows), with_vectors);
            py::dict d;
            d["eigenvalues"] = res.eigenvalues;
            if (with_vectors) d["eigenvectors"] = matrix_rows(res.eigenvectors);
            return d;
        },
        py::arg("matrix"), py::arg("with_vectors") = false);

    m.def("vector_field", &vector_field, py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("xi"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("norm2", &Trajectory::norm2)
        .def_readonly("norm_inf", &Trajectory::norm_inf)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("converged", &Trajectory::converged)
        .def_readonly("t_sync", &Trajectory::t_sync)
        .def("write_csv", [](const Trajectory& t) {
            std::ostringstream ss;
            t.write_csv(ss);
            return ss.str();
        });

    m.def(
        "integrate",
        [](const Topology& topo, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           const std::vector<double>& xi0, double dt, double t_max, double sync_tol, int record_stride,
           bool record_states) {
            IntegrateOptions opts{dt, t_max, sync_tol, record_stride, record_states};
            return integrate(topo, qg, ql, xi0, opts);
        },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("xi0"), py::arg("dt") = 0.01,
        py::arg("t_max") = 150.0, py::arg("sync_tol") = 1e-3, py::arg("record_stride") = 1,
        py::arg("record_states") = true);

    m.def(
        "fit_rate",
        [](const Trajectory& traj, double t_start, double t_end) {
            const RateFit fit = fit_rate(traj, t_start, t_end);
            py::dict d;
            d["alpha_hat"] = fit.alpha_hat;
            d["c_hat"] = fit.c_hat;
            d["r_squared"] = fit.r_squared;
            return d;
        },
        py::arg("trajectory"), py::arg("t_start"), py::arg("t_end"));

    m.def(
        "check_invariance",
        [](const Topology& topo, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           double eps_bar, int samples, std::uint64_t seed) {
            const auto rep = check_invariance(topo, qg, ql, eps_bar, samples, seed);
            py::dict d;
            d["passed"] = rep.passed;
            d["samples"] = rep.samples;
            d["boundary_cases"] = rep.boundary_cases;
            d["violations"] = rep.violations.size();
            return d;
        },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("eps_bar"), py::arg("samples") = 1000,
        py::arg("seed") = 7);

    m.def(
        "run_pulse_sim",
        [](const Topology& topo, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           const std::vector<double>& xi0, double t_max, double sync_tol, double per_pulse_energy,
           double idle_power_per_node) {
            auto net = PulseNetwork::from_deviations(topo, qg, ql, xi0,
                                                     {per_pulse_energy, idle_power_per_node});
            PulseResult res = run_pulse_sim(std::move(net), t_max, sync_tol);
            py::dict d;
            d["converged"] = res.converged;
            d["t_sync"] = res.t_sync;
            d["elapsed"] = res.elapsed;
            d["energy"] = res.energy;
            d["pulse_totals"] = res.pulse_totals;
            d["cue_pulses"] = res.cue_pulses;
            d["events"] = res.events;
            d["trace"] = res.trace;
            d["final_phases"] = res.final_phases;
            d["final_cue_phase"] = res.final_cue_phase;
            return d;
        },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("xi0"), py::arg("t_max"),
        py::arg("sync_tol") = 1e-3, py::arg("per_pulse_energy") = 1e-5,
        py::arg("idle_power_per_node") = 1e-4);

    m.def(
        "inner_rate_bound",
        [](const Topology& t, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           double eps_bar, int grid) { return inner_rate_bound(t, qg, ql, eps_bar, grid).to_json().dump(); },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("eps_bar"), py::arg("grid_points") = 10000);
    m.def(
        "outer_rate_bound",
        [](const Topology& t, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           double eps_bar, int grid) { return outer_rate_bound(t, qg, ql, eps_bar, grid).to_json().dump(); },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("eps_bar"), py::arg("grid_points") = 10000);
    m.def(
        "check_inner_sync_conditions",
        [](const Topology& t) {
            const auto r = check_inner_sync_conditions(t);
            py::dict d;
            d["connected"] = r.connected;
            d["has_positive_gain"] = r.has_positive_gain;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("topology"));
    m.def(
        "check_outer_sync_conditions",
        [](const Topology& t, const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
           double eps_bar,
           int grid) { return check_outer_sync_conditions(t, qg, ql, eps_bar, grid).to_json().dump(); },
        py::arg("topology"), py::arg("qg"), py::arg("ql"), py::arg("eps_bar"), py::arg("grid_points") = 10000);

    m.def(
        "run_grid_file",
        [](const std::string& path) { return run_grid(ExperimentConfig::from_json_file(path)).to_json().dump(); },
        py::arg("config_path"));
    m.def(
        "run_grid",
        [](const std::string& config_json) {
            return run_grid(ExperimentConfig::from_json(nlohmann::json::parse(config_json))).to_json().dump();
        },
        py::arg("config_json"));
    m.def(
        "desync_census",
        [](const std::string& config_json) {
            const auto census = desync_census(ExperimentConfig::from_json(nlohmann::json::parse(config_json)));
            py::dict d;
            d["runs"] = census.runs;
            d["unsynchronized"] = census.unsynchronized;
            d["fraction"] = census.fraction;
            return d;
        },
        py::arg("config_json"));

    m.attr("PI") = kPi;
    m.def("wrap_to_pi", &wrap_to_pi, py::arg("x"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
