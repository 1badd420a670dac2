#include "pcosync/experiments.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace pcosync {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t run_index) {
    return mix64(master + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

double uniform_from_bits(std::uint64_t bits, double lo, double hi) {
    return lo + (hi - lo) * ((bits >> 11) * 0x1.0p-53);
}

PhaseResponseFunction PrfSpec::build() const {
    switch (family) {
        case PrfFamily::Tanh: return PhaseResponseFunction::tanh_family(epsilon);
        case PrfFamily::Sine: return PhaseResponseFunction::sine(amplitude);
        case PrfFamily::Custom: return PhaseResponseFunction::custom(points);
    }
    throw std::logic_error("PrfSpec: bad family");
}

PhaseResponseFunction PrfSpec::build_with_eps(double eps) const {
    if (family != PrfFamily::Tanh)
        throw std::invalid_argument("sweep varies eps, but the PRF is not from the tanh family");
    return PhaseResponseFunction::tanh_family(eps);
}

PrfSpec PrfSpec::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {"family", "epsilon", "amplitude", "points", "csv"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw std::invalid_argument("prf: unknown key \"" + it.key() + "\"");
    const std::string fam = j.at("family").get<std::string>();
    PrfSpec spec;
    if (fam == "tanh") {
        spec.family = PrfFamily::Tanh;
        spec.epsilon = j.at("epsilon").get<double>();
        if (!(spec.epsilon > 0.0)) throw std::invalid_argument("prf: epsilon must be positive");
    } else if (fam == "sine") {
        spec.family = PrfFamily::Sine;
        spec.amplitude = j.at("amplitude").get<double>();
    } else if (fam == "custom") {
        spec.family = PrfFamily::Custom;
        if (j.contains("csv")) {
            const auto prf = PhaseResponseFunction::from_csv(j.at("csv").get<std::string>());
            spec.points = prf.table();
        } else {
            for (const auto& p : j.at("points")) spec.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        PhaseResponseFunction::custom(spec.points);  // validate now
    } else {
        throw std::invalid_argument("prf: unknown family \"" + fam + "\"");
    }
    return spec;
}

nlohmann::json PrfSpec::to_json() const {
    switch (family) {
        case PrfFamily::Tanh: return {{"family", "tanh"}, {"epsilon", epsilon}};
        case PrfFamily::Sine: return {{"family", "sine"}, {"amplitude", amplitude}};
        case PrfFamily::Custom: {
            nlohmann::json pts = nlohmann::json::array();
            for (auto [x, v] : points) pts.push_back({x, v});
            return {{"family", "custom"}, {"points", pts}};
        }
    }
    return {};
}

namespace {

SweepParam param_from_string(const std::string& s) {
    if (s == "eps_g") return SweepParam::EpsG;
    if (s == "eps_l") return SweepParam::EpsL;
    if (s == "g") return SweepParam::GainUniform;
    if (s == "l") return SweepParam::LocalStrength;
    throw std::invalid_argument("sweep axis: unknown param \"" + s + "\" (expected eps_g, eps_l, g or l)");
}

std::string param_to_string(SweepParam p) {
    switch (p) {
        case SweepParam::EpsG: return "eps_g";
        case SweepParam::EpsL: return "eps_l";
        case SweepParam::GainUniform: return "g";
        case SweepParam::LocalStrength: return "l";
    }
    return "?";
}

SweepAxis axis_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {"param", "values"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw std::invalid_argument("sweep axis: unknown key \"" + it.key() + "\"");
    SweepAxis ax;
    ax.param = param_from_string(j.at("param").get<std::string>());
    ax.values = j.at("values").get<std::vector<double>>();
    if (ax.values.empty()) throw std::invalid_argument("sweep axis: values must be non-empty");
    return ax;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
    static const std::set<std::string> known = {"topology", "qg", "ql", "energy", "init", "seed",
                                                "runs", "simulator", "sync_tol", "t_max", "dt",
                                                "rows", "cols", "jobs"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw std::invalid_argument("experiment: unknown key \"" + it.key() + "\"");

    Topology topo = [&] {
        const auto& jt = j.at("topology");
        if (jt.is_string()) {
            std::filesystem::path p = jt.get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            return Topology::from_json_file(p.string());
        }
        return Topology::from_json(jt);
    }();

    ExperimentConfig cfg{.topo = std::move(topo),
                         .qg = PrfSpec::from_json(j.at("qg")),
                         .ql = PrfSpec::from_json(j.at("ql"))};
    if (j.contains("energy")) {
        const auto& je = j.at("energy");
        static const std::set<std::string> eknown = {"per_pulse_energy", "idle_power_per_node"};
        for (auto it = je.begin(); it != je.end(); ++it)
            if (!eknown.count(it.key())) throw std::invalid_argument("energy: unknown key \"" + it.key() + "\"");
        if (je.contains("per_pulse_energy")) cfg.energy.per_pulse_energy = je.at("per_pulse_energy").get<double>();
        if (je.contains("idle_power_per_node"))
            cfg.energy.idle_power_per_node = je.at("idle_power_per_node").get<double>();
    }
    if (j.contains("init")) {
        const auto& ji = j.at("init");
        if (!ji.is_object() || !ji.contains("uniform") || ji.size() != 1)
            throw std::invalid_argument("experiment: init must be {\"uniform\": [lo, hi]}");
        cfg.init_lo = ji.at("uniform").at(0).get<double>();
        cfg.init_hi = ji.at("uniform").at(1).get<double>();
    }
    if (cfg.init_lo < -kPi || cfg.init_hi > kPi || cfg.init_lo >= cfg.init_hi)
        throw std::invalid_argument("experiment: init range must satisfy -pi <= lo < hi <= pi");
    if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
    if (cfg.runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
    if (j.contains("simulator")) {
        const std::string s = j.at("simulator").get<std::string>();
        if (s == "ode") cfg.simulator = SimulatorKind::AveragedOde;
        else if (s == "pulse") cfg.simulator = SimulatorKind::PulseEvent;
        else throw std::invalid_argument("experiment: simulator must be \"ode\" or \"pulse\"");
    }
    if (j.contains("sync_tol")) cfg.sync_tol = j.at("sync_tol").get<double>();
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("rows")) cfg.rows = axis_from_json(j.at("rows"));
    if (j.contains("cols")) cfg.cols = axis_from_json(j.at("cols"));
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (cfg.jobs < 1) cfg.jobs = 1;
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("experiment: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("experiment: bad JSON in " + path + ": " + e.what());
    }
    return from_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["topology"] = topo.to_json();
    j["qg"] = qg.to_json();
    j["ql"] = ql.to_json();
    j["energy"] = {{"per_pulse_energy", energy.per_pulse_energy},
                   {"idle_power_per_node", energy.idle_power_per_node}};
    j["init"] = {{"uniform", {init_lo, init_hi}}};
    j["seed"] = master_seed;
    j["runs"] = runs;
    j["simulator"] = simulator == SimulatorKind::AveragedOde ? "ode" : "pulse";
    j["sync_tol"] = sync_tol;
    j["t_max"] = t_max;
    j["dt"] = dt;
    if (rows) j["rows"] = {{"param", param_to_string(rows->param)}, {"values", rows->values}};
    if (cols) j["cols"] = {{"param", param_to_string(cols->param)}, {"values", cols->values}};
    j["jobs"] = jobs;
    return j;
}

namespace {

struct CellSetup {
    Topology topo;
    PhaseResponseFunction qg;
    PhaseResponseFunction ql;
};

CellSetup make_cell(const ExperimentConfig& cfg, double row_value, double col_value) {
    Topology topo = cfg.topo;
    PhaseResponseFunction qg = cfg.qg.build();
    PhaseResponseFunction ql = cfg.ql.build();
    auto apply = [&](SweepParam p, double v) {
        switch (p) {
            case SweepParam::EpsG: qg = cfg.qg.build_with_eps(v); break;
            case SweepParam::EpsL: ql = cfg.ql.build_with_eps(v); break;
            case SweepParam::GainUniform: topo = topo.with_uniform_gain(v); break;
            case SweepParam::LocalStrength: topo = topo.with_local_strength(v); break;
        }
    };
    if (cfg.rows) apply(cfg.rows->param, row_value);
    if (cfg.cols) apply(cfg.cols->param, col_value);
    return {std::move(topo), std::move(qg), std::move(ql)};
}

std::vector<double> draw_initial(const ExperimentConfig& cfg, int run_index) {
    std::vector<double> xi(cfg.topo.n());
    std::mt19937_64 rng(run_seed(cfg.master_seed, run_index));
    for (double& v : xi) v = uniform_from_bits(rng(), cfg.init_lo, cfg.init_hi);
    return xi;
}

RunRecord one_run(const ExperimentConfig& cfg, const CellSetup& cell, int run_index) {
    RunRecord rec;
    const std::vector<double> xi0 = draw_initial(cfg, run_index);
    try {
        if (cfg.simulator == SimulatorKind::AveragedOde) {
            IntegrateOptions opts;
            opts.dt = cfg.dt;
            opts.t_max = cfg.t_max;
            opts.sync_tol = cfg.sync_tol;
            opts.record_states = false;
            // one norm sample per period is plenty for the rate fit
            opts.record_stride = std::max(1, static_cast<int>(std::lround(cell.topo.period() / cfg.dt)));
            const Trajectory traj = integrate(cell.topo, cell.qg, cell.ql, xi0, opts);
            rec.converged = traj.converged;
            rec.t_sync = traj.t_sync;
            const double elapsed = traj.converged ? traj.t_sync : cfg.t_max;
            // energy proxy for the averaged model: every node fires once per
            // period, so the pulse count grows at rate N/T
            const int n = cell.topo.n();
            rec.energy = elapsed * cfg.energy.idle_power_per_node * n +
                         cfg.energy.per_pulse_energy * n * elapsed / cell.topo.period();
            rec.alpha_hat = std::numeric_limits<double>::quiet_NaN();
            if (traj.converged && traj.t_sync > 0.0) {
                try {
                    const RateFit fit = fit_rate(traj, 0.0, traj.t_sync);
                    rec.alpha_hat = fit.alpha_hat;
                    rec.r_squared = fit.r_squared;
                } catch (const std::invalid_argument&) {
                    // too few samples or a zero norm: no fit for this run
                }
            }
        } else {
            PulseNetwork net =
                PulseNetwork::from_deviations(cell.topo, cell.qg, cell.ql, xi0, cfg.energy);
            const PulseResult pr = run_pulse_sim(std::move(net), cfg.t_max, cfg.sync_tol);
            rec.converged = pr.converged;
            rec.t_sync = pr.t_sync;
            rec.energy = pr.energy;
            rec.alpha_hat = std::numeric_limits<double>::quiet_NaN();
            if (pr.converged && pr.t_sync > 0.0) {
                try {
                    const RateFit fit = fit_rate(pr.trace, 0.0, pr.t_sync);
                    rec.alpha_hat = fit.alpha_hat;
                    rec.r_squared = fit.r_squared;
                } catch (const std::invalid_argument&) {
                }
            }
        }
    } catch (const std::runtime_error&) {
        rec.failed = true;
        rec.converged = false;
        rec.t_sync = -1.0;
    }
    return rec;
}

void aggregate(CellStats& cell) {
    cell.runs = static_cast<int>(cell.records.size());
    double sum_t = 0.0, sum_t2 = 0.0, sum_e = 0.0, sum_a = 0.0;
    int fits = 0;
    for (const RunRecord& r : cell.records) {
        if (!r.converged) continue;
        ++cell.converged_count;
        sum_t += r.t_sync;
        sum_t2 += r.t_sync * r.t_sync;
        sum_e += r.energy;
        if (std::isfinite(r.alpha_hat)) {
            sum_a += r.alpha_hat;
            ++fits;
        }
    }
    cell.converged_fraction = static_cast<double>(cell.converged_count) / cell.runs;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (cell.converged_count > 0) {
        cell.mean_t_sync = sum_t / cell.converged_count;
        const double var = sum_t2 / cell.converged_count - cell.mean_t_sync * cell.mean_t_sync;
        cell.std_t_sync = std::sqrt(std::max(0.0, var));
        cell.mean_energy = sum_e / cell.converged_count;
        cell.mean_alpha_hat = fits > 0 ? sum_a / fits : nan;
    } else {
        cell.mean_t_sync = nan;
        cell.std_t_sync = nan;
        cell.mean_energy = nan;
        cell.mean_alpha_hat = nan;
    }
}

}  // namespace

ExperimentReport run_grid(const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.config = cfg.to_json();
    report.row_values = cfg.rows ? cfg.rows->values : std::vector<double>{0.0};
    report.col_values = cfg.cols ? cfg.cols->values : std::vector<double>{0.0};

    const std::size_t n_rows = report.row_values.size();
    const std::size_t n_cols = report.col_values.size();
    report.cells.resize(n_rows * n_cols);

    std::vector<CellSetup> setups;
    setups.reserve(report.cells.size());
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < n_cols; ++c) {
            report.cells[r * n_cols + c].row_value = report.row_values[r];
            report.cells[r * n_cols + c].col_value = report.col_values[c];
            report.cells[r * n_cols + c].records.resize(cfg.runs);
            setups.push_back(make_cell(cfg, report.row_values[r], report.col_values[c]));
        }

    const std::size_t total = report.cells.size() * static_cast<std::size_t>(cfg.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t cell_idx = task / cfg.runs;
            const int run_idx = static_cast<int>(task % cfg.runs);
            report.cells[cell_idx].records[run_idx] = one_run(cfg, setups[cell_idx], run_idx);
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (CellStats& cell : report.cells) aggregate(cell);
    return report;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["config"] = config;
    j["row_values"] = row_values;
    j["col_values"] = col_values;
    auto& jc = j["cells"] = nlohmann::json::array();
    for (const CellStats& c : cells) {
        nlohmann::json cell;
        cell["row_value"] = c.row_value;
        cell["col_value"] = c.col_value;
        cell["runs"] = c.runs;
        cell["converged_count"] = c.converged_count;
        cell["converged_fraction"] = c.converged_fraction;
        auto put = [&cell](const char* key, double v) {
            if (std::isfinite(v)) cell[key] = v; else cell[key] = nullptr;
        };
        put("mean_t_sync", c.mean_t_sync);
        put("std_t_sync", c.std_t_sync);
        put("mean_energy", c.mean_energy);
        put("mean_alpha_hat", c.mean_alpha_hat);
        auto& jr = cell["runs_detail"] = nlohmann::json::array();
        for (const RunRecord& r : c.records) {
            nlohmann::json rec;
            rec["converged"] = r.converged;
            rec["failed"] = r.failed;
            rec["t_sync"] = r.converged ? nlohmann::json(r.t_sync) : nlohmann::json(nullptr);
            rec["energy"] = r.energy;
            rec["alpha_hat"] = std::isfinite(r.alpha_hat) ? nlohmann::json(r.alpha_hat) : nlohmann::json(nullptr);
            jr.push_back(std::move(rec));
        }
        jc.push_back(std::move(cell));
    }
    return j;
}

void ExperimentReport::write_csv(std::ostream& out) const {
    out << "# config: " << config.dump() << "\n";
    out << "row_value,col_value,runs,converged_count,converged_fraction,"
           "mean_t_sync,std_t_sync,mean_energy,mean_alpha_hat\n";
    out << std::setprecision(12);
    for (const CellStats& c : cells) {
        out << c.row_value << ',' << c.col_value << ',' << c.runs << ',' << c.converged_count << ','
            << c.converged_fraction << ',' << c.mean_t_sync << ',' << c.std_t_sync << ','
            << c.mean_energy << ',' << c.mean_alpha_hat << '\n';
    }
}

std::string ExperimentReport::format_table() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << std::setw(12) << "row\\col";
    for (double c : col_values) out << std::setw(20) << c;
    out << '\n';
    for (std::size_t r = 0; r < row_values.size(); ++r) {
        out << std::setw(12) << row_values[r];
        for (std::size_t c = 0; c < col_values.size(); ++c) {
            const CellStats& cell = this->cell(r, c);
            std::ostringstream t;
            t << std::fixed << std::setprecision(2);
            if (cell.converged_count == 0)
                t << "(no sync, -)";
            else if (cell.converged_fraction < 1.0)
                t << '(' << cell.mean_t_sync << ", " << cell.mean_energy << ")*";
            else
                t << '(' << cell.mean_t_sync << ", " << cell.mean_energy << ')';
            out << std::setw(20) << t.str();
        }
        out << '\n';
    }
    if (config.contains("runs")) out << "runs/cell: " << config["runs"] << "; * = not all runs converged\n";
    return out.str();
}

DesyncCensus desync_census(const ExperimentConfig& cfg) {
    if (cfg.rows || cfg.cols)
        throw std::invalid_argument("desync_census: expects a single-cell config (no rows/cols axes)");
    const ExperimentReport report = run_grid(cfg);
    DesyncCensus census;
    census.runs = cfg.runs;
    census.unsynchronized = cfg.runs - report.cells.front().converged_count;
    census.fraction = static_cast<double>(census.unsynchronized) / cfg.runs;
    census.config = cfg.to_json();
    return census;
}

}  // namespace pcosync
