#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pcosync/experiments.hpp"

namespace pcosync {

/// A single-run setup: topology, PRFs, initial deviations (explicit or a
/// seeded uniform draw), energy model and simulation knobs. This is the
/// payload of the scenario JSON files consumed by the CLI.
struct ScenarioConfig {
    Topology topo;
    PrfSpec qg;
    PrfSpec ql;
    EnergyConfig energy;
    std::optional<std::vector<double>> init_explicit;
    double init_lo = -kPi / 2.0;
    double init_hi = kPi / 2.0;
    std::uint64_t init_seed = 1;
    double dt = 0.01;
    double t_max = 150.0;
    double sync_tol = 1e-3;

    /// The initial deviation vector: the explicit list when given, otherwise
    /// the seeded uniform draw.
    std::vector<double> initial_deviations() const;

    static ScenarioConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
    static ScenarioConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;
};

}  // namespace pcosync
