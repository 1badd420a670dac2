// pcosync command-line front end: PRF checks, rate bounds, single
// simulations and Monte Carlo sweeps, all driven by JSON configs.
//
// Exit codes: 0 success, 1 a requested check failed, 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pcosync/analysis.hpp"
#include "pcosync/dynamics.hpp"
#include "pcosync/experiments.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/pulse_sim.hpp"
#include "pcosync/scenario.hpp"

using namespace pcosync;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Resolve an output path against --out/-o or the PCOSYNC_OUT_DIR env var.
fs::path resolve_out(const std::string& name, const std::string& out_opt) {
    fs::path p = out_opt.empty() ? fs::path(name) : fs::path(out_opt);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("PCOSYNC_OUT_DIR")) p = fs::path(dir) / p;
    }
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void print_advisories(const Topology& topo) {
    for (const auto& s : topo.advisories()) std::cerr << "warning: " << s << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_prf_check(const std::string& family, double epsilon, double amplitude, const std::string& table,
                  int grid, bool run_eps_monotonicity, bool verbose) {
    PhaseResponseFunction prf = [&] {
        if (!table.empty()) return PhaseResponseFunction::from_csv(table);
        if (family == "tanh") return PhaseResponseFunction::tanh_family(epsilon);
        if (family == "sine") return PhaseResponseFunction::sine(amplitude);
        throw CLI::ValidationError("--family must be tanh or sine, or use --table");
    }();

    const auto rep = validate_admissibility(prf, grid);
    std::cout << prf.describe() << ": zero " << (rep.zero_ok ? "ok" : "FAIL") << ", odd "
              << (rep.odd_ok ? "ok" : "FAIL") << ", sign " << (rep.sign_ok ? "ok" : "FAIL") << " ("
              << rep.grid_points << " grid points, tol " << rep.tolerance << ")\n";
    if (!rep.sign_violations.empty()) {
        std::cout << "sign condition violated at " << rep.sign_violations.size() << " abscissae";
        if (verbose) {
            std::cout << ":";
            for (std::size_t i = 0; i < rep.sign_violations.size() && i < 8; ++i)
                std::cout << ' ' << rep.sign_violations[i];
            if (rep.sign_violations.size() > 8) std::cout << " ...";
        }
        std::cout << "\n";
    }
    bool ok = rep.passed;

    if (prf.family() == PrfFamily::Tanh && run_eps_monotonicity) {
        const auto t5 = verify_tanh_rate_monotonicity({prf.epsilon()}, grid);
        std::cout << "rate monotonicity in eps: " << (t5.passed ? "ok" : "FAIL") << "\n";
        ok = ok && t5.passed;
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_bounds(const std::string& scenario_path, double eps_bar, int grid, const std::string& out_opt) {
    const ScenarioConfig sc = ScenarioConfig::from_json_file(scenario_path);
    print_advisories(sc.topo);
    const PhaseResponseFunction qg = sc.qg.build(), ql = sc.ql.build();

    nlohmann::json j;
    j["scenario"] = sc.to_json();
    j["eps_bar"] = eps_bar;
    if (eps_bar < kPi / 2.0) {
        const RateBounds rb = inner_rate_bound(sc.topo, qg, ql, eps_bar, grid);
        j["bounds"] = rb.to_json();
        const auto cond = check_inner_sync_conditions(sc.topo);
        j["conditions"] = {{"connected", cond.connected},
                           {"has_positive_gain", cond.has_positive_gain},
                           {"passed", cond.passed}};
    } else if (eps_bar < kPi) {
        const RateBounds rb = outer_rate_bound(sc.topo, qg, ql, eps_bar, grid);
        j["bounds"] = rb.to_json();
        j["conditions"] = check_outer_sync_conditions(sc.topo, qg, ql, eps_bar, grid).to_json();
    } else {
        throw CLI::ValidationError("--eps-bar must be below pi");
    }
    const std::string text = j.dump(2) + "\n";
    if (!out_opt.empty()) {
        write_text(resolve_out("bounds.json", out_opt), text);
    }
    std::cout << text;
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& simulator, const std::string& out_opt,
                 std::optional<double> dt, std::optional<double> t_max, std::optional<double> sync_tol,
                 std::optional<std::uint64_t> seed) {
    ScenarioConfig sc = ScenarioConfig::from_json_file(scenario_path);
    if (dt) sc.dt = *dt;
    if (t_max) sc.t_max = *t_max;
    if (sync_tol) sc.sync_tol = *sync_tol;
    if (seed) {
        sc.init_seed = *seed;
        sc.init_explicit.reset();
    }
    print_advisories(sc.topo);

    const PhaseResponseFunction qg = sc.qg.build(), ql = sc.ql.build();
    const std::vector<double> xi0 = sc.initial_deviations();

    nlohmann::json summary;
    summary["config"] = sc.to_json();
    summary["simulator"] = simulator;

    Trajectory trace;
    if (simulator == "ode") {
        IntegrateOptions opts;
        opts.dt = sc.dt;
        opts.t_max = sc.t_max;
        opts.sync_tol = sc.sync_tol;
        trace = integrate(sc.topo, qg, ql, xi0, opts);
        const double elapsed = trace.converged ? trace.t_sync : sc.t_max;
        const int n = sc.topo.n();
        summary["energy"] = elapsed * sc.energy.idle_power_per_node * n +
                            sc.energy.per_pulse_energy * n * elapsed / sc.topo.period();
    } else if (simulator == "pulse") {
        auto net = PulseNetwork::from_deviations(sc.topo, qg, ql, xi0, sc.energy);
        PulseResult res = run_pulse_sim(std::move(net), sc.t_max, sc.sync_tol);
        trace = std::move(res.trace);
        summary["energy"] = res.energy;
        summary["events"] = res.events;
        nlohmann::json totals = nlohmann::json::array();
        for (long c : res.pulse_totals) totals.push_back(c);
        summary["pulse_totals"] = totals;
        summary["cue_pulses"] = res.cue_pulses;
    } else {
        throw CLI::ValidationError("--simulator must be ode or pulse");
    }

    summary["converged"] = trace.converged;
    summary["t_sync"] = trace.converged ? nlohmann::json(trace.t_sync) : nlohmann::json(nullptr);
    if (trace.norm2.size() >= 10 && trace.converged && trace.t_sync > 0.0) {
        try {
            const RateFit fit = fit_rate(trace, 0.0, trace.t_sync);
            summary["fit"] = {{"alpha_hat", fit.alpha_hat}, {"c_hat", fit.c_hat}, {"r_squared", fit.r_squared}};
        } catch (const std::invalid_argument&) {
        }
    }

    const fs::path base = resolve_out("simulate", out_opt);
    const fs::path csv_path = base.string() + ".csv";
    const fs::path json_path = base.string() + ".json";
    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
        csv << "# config: " << sc.to_json().dump() << "\n";
        trace.write_csv(csv);
    }
    write_text(json_path, summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    std::cerr << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_opt, std::optional<int> jobs,
              std::optional<std::uint64_t> seed, const std::string& format) {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    if (jobs) cfg.jobs = *jobs;
    if (seed) cfg.master_seed = *seed;
    print_advisories(cfg.topo);

    const ExperimentReport report = run_grid(cfg);
    const fs::path dir = resolve_out("sweep_out", out_opt);
    fs::create_directories(dir);
    {
        std::ofstream csv(dir / "report.csv");
        report.write_csv(csv);
    }
    write_text(dir / "report.json", report.to_json().dump(2) + "\n");
    write_text(dir / "table.txt", report.format_table());

    if (format == "table")
        std::cout << report.format_table();
    else if (format == "json")
        std::cout << report.to_json().dump(2) << "\n";
    else {
        std::ostringstream csv;
        report.write_csv(csv);
        std::cout << csv.str();
    }
    std::cerr << "wrote " << (dir / "report.csv").string() << ", report.json, table.txt\n";
    return kExitOk;
}

int cmd_desync_census(const std::string& config_path, std::optional<std::uint64_t> seed,
                      const std::string& out_opt) {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    if (seed) cfg.master_seed = *seed;
    const DesyncCensus census = desync_census(cfg);
    nlohmann::json j = {{"runs", census.runs},
                        {"unsynchronized", census.unsynchronized},
                        {"fraction", census.fraction},
                        {"config", census.config}};
    const std::string text = j.dump(2) + "\n";
    if (!out_opt.empty()) write_text(resolve_out("census.json", out_opt), text);
    std::cout << text;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse-coupled oscillator synchronization toolkit"};
    app.require_subcommand(1);

    // prf-check
    auto* prf = app.add_subcommand("prf-check", "validate a phase response function");
    std::string family = "tanh", table;
    double epsilon = 0.4, amplitude = 1.0;
    int grid = 10000;
    bool skip_monotonicity = false, verbose = false;
    prf->add_option("--family", family, "tanh or sine")->check(CLI::IsMember({"tanh", "sine"}));
    prf->add_option("--epsilon", epsilon, "tanh eps parameter");
    prf->add_option("--amplitude", amplitude, "sine amplitude");
    prf->add_option("--table", table, "CSV table of (angle_rad, value) rows");
    prf->add_option("--grid", grid, "grid points for the checks")->check(CLI::PositiveNumber);
    prf->add_flag("--skip-monotonicity", skip_monotonicity, "admissibility only");
    prf->add_flag("-v,--verbose", verbose, "list violating abscissae");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "rate bounds and sufficient conditions for a scenario");
    std::string bounds_scenario, bounds_out;
    double eps_bar = 1.0;
    int bounds_grid = 10000;
    bounds->add_option("--scenario", bounds_scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    bounds->add_option("--eps-bar", eps_bar, "deviation box half-width (selects regime)")->required();
    bounds->add_option("--grid", bounds_grid, "grid points for PRF extrema");
    bounds->add_option("-o,--out", bounds_out, "also write the JSON report here");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one simulation, write trajectory CSV + summary JSON");
    std::string sim_scenario, sim_kind = "ode", sim_out;
    std::optional<double> sim_dt, sim_tmax, sim_tol;
    std::optional<std::uint64_t> sim_seed;
    sim->add_option("--scenario", sim_scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--simulator", sim_kind, "ode (averaged model) or pulse (event-driven)")
        ->check(CLI::IsMember({"ode", "pulse"}));
    sim->add_option("--dt", sim_dt, "override the integration step");
    sim->add_option("--t-max", sim_tmax, "override the horizon");
    sim->add_option("--sync-tol", sim_tol, "override the sync threshold");
    sim->add_option("--seed", sim_seed, "draw the initial state from this seed");
    sim->add_option("-o,--out", sim_out, "output prefix (default: simulate)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo parameter sweep from an experiment config");
    std::string sweep_config, sweep_out, sweep_format = "table";
    std::optional<int> sweep_jobs;
    std::optional<std::uint64_t> sweep_seed;
    sweep->add_option("--config", sweep_config, "experiment JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", sweep_out, "output directory (default: sweep_out)");
    sweep->add_option("--jobs", sweep_jobs, "worker threads");
    sweep->add_option("--seed", sweep_seed, "override the master seed");
    sweep->add_option("--format", sweep_format, "stdout format")->check(CLI::IsMember({"csv", "json", "table"}));

    // desync-census
    auto* census = app.add_subcommand("desync-census", "fraction of runs that fail to synchronize");
    std::string census_config, census_out;
    std::optional<std::uint64_t> census_seed;
    census->add_option("--config", census_config, "experiment JSON (single cell)")
        ->required()
        ->check(CLI::ExistingFile);
    census->add_option("--seed", census_seed, "override the master seed");
    census->add_option("-o,--out", census_out, "also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (prf->parsed())
            return cmd_prf_check(family, epsilon, amplitude, table, grid, !skip_monotonicity, verbose);
        if (bounds->parsed()) return cmd_bounds(bounds_scenario, eps_bar, bounds_grid, bounds_out);
        if (sim->parsed())
            return cmd_simulate(sim_scenario, sim_kind, sim_out, sim_dt, sim_tmax, sim_tol, sim_seed);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_jobs, sweep_seed, sweep_format);
        if (census->parsed()) return cmd_desync_census(census_config, census_seed, census_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
