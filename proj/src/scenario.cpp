#include "pcosync/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pcosync {

std::vector<double> ScenarioConfig::initial_deviations() const {
    if (init_explicit) return *init_explicit;
    std::vector<double> xi(topo.n());
    std::mt19937_64 rng(init_seed);
    for (double& v : xi) v = uniform_from_bits(rng(), init_lo, init_hi);
    return xi;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
    static const std::set<std::string> known = {"topology", "qg", "ql", "energy", "init",
                                                "dt", "t_max", "sync_tol"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw std::invalid_argument("scenario: unknown key \"" + it.key() + "\"");

    Topology topo = [&] {
        const auto& jt = j.at("topology");
        if (jt.is_string()) {
            std::filesystem::path p = jt.get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            return Topology::from_json_file(p.string());
        }
        return Topology::from_json(jt);
    }();
    ScenarioConfig cfg{.topo = std::move(topo),
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
        if (ji.is_array()) {
            cfg.init_explicit = ji.get<std::vector<double>>();
            if (static_cast<int>(cfg.init_explicit->size()) != cfg.topo.n())
                throw std::invalid_argument("scenario: explicit init length does not match n");
        } else if (ji.is_object() && ji.contains("uniform")) {
            static const std::set<std::string> iknown = {"uniform", "seed"};
            for (auto it = ji.begin(); it != ji.end(); ++it)
                if (!iknown.count(it.key()))
                    throw std::invalid_argument("scenario init: unknown key \"" + it.key() + "\"");
            cfg.init_lo = ji.at("uniform").at(0).get<double>();
            cfg.init_hi = ji.at("uniform").at(1).get<double>();
            if (cfg.init_lo < -kPi || cfg.init_hi > kPi || cfg.init_lo >= cfg.init_hi)
                throw std::invalid_argument("scenario: init range must satisfy -pi <= lo < hi <= pi");
            if (ji.contains("seed")) cfg.init_seed = ji.at("seed").get<std::uint64_t>();
        } else {
            throw std::invalid_argument("scenario: init must be a list or {\"uniform\": [lo, hi], \"seed\": n}");
        }
    }
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("sync_tol")) cfg.sync_tol = j.at("sync_tol").get<double>();
    if (!(cfg.dt > 0.0) || !(cfg.t_max >= 0.0) || !(cfg.sync_tol > 0.0))
        throw std::invalid_argument("scenario: dt and sync_tol must be positive, t_max nonnegative");
    return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("scenario: bad JSON in " + path + ": " + e.what());
    }
    return from_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["topology"] = topo.to_json();
    j["qg"] = qg.to_json();
    j["ql"] = ql.to_json();
    j["energy"] = {{"per_pulse_energy", energy.per_pulse_energy},
                   {"idle_power_per_node", energy.idle_power_per_node}};
    if (init_explicit)
        j["init"] = *init_explicit;
    else
        j["init"] = {{"uniform", {init_lo, init_hi}}, {"seed", init_seed}};
    j["dt"] = dt;
    j["t_max"] = t_max;
    j["sync_tol"] = sync_tol;
    return j;
}

}  // namespace pcosync
