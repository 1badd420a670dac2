#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pcosync/dynamics.hpp"
#include "pcosync/pulse_sim.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

/// SplitMix64 finalizer; the documented seed-splitting scheme. Run k of an
/// experiment draws its initial condition from
///   mix64(master_seed + (k + 1) * 0x9E3779B97F4A7C15)
/// so runs are independent of each other but the k-th run re-uses the same
/// draw in every grid cell (common random numbers: cross-cell comparisons
/// see identical initial conditions).
std::uint64_t mix64(std::uint64_t z);
std::uint64_t run_seed(std::uint64_t master, std::uint64_t run_index);

/// Uniform double in [lo, hi) from a 64-bit word (top 53 bits).
double uniform_from_bits(std::uint64_t bits, double lo, double hi);

/// Serializable PRF description; sweeps rebuild tanh-family PRFs with
/// substituted eps values.
struct PrfSpec {
    PrfFamily family = PrfFamily::Tanh;
    double epsilon = 0.4;
    double amplitude = 1.0;
    std::vector<std::pair<double, double>> points;  // Custom, inline table

    PhaseResponseFunction build() const;
    PhaseResponseFunction build_with_eps(double eps) const;

    static PrfSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

enum class SimulatorKind { AveragedOde, PulseEvent };

/// Grid axes a sweep can vary. EpsG/EpsL substitute the tanh eps of the cue
/// or local PRF; GainUniform sets every g_i; LocalStrength sets l.
enum class SweepParam { EpsG, EpsL, GainUniform, LocalStrength };

struct SweepAxis {
    SweepParam param = SweepParam::EpsG;
    std::vector<double> values;
};

struct ExperimentConfig {
    Topology topo;
    PrfSpec qg;
    PrfSpec ql;
    EnergyConfig energy;
    double init_lo = -kPi / 2.0;
    double init_hi = kPi / 2.0;
    std::uint64_t master_seed = 1;
    int runs = 100;
    SimulatorKind simulator = SimulatorKind::AveragedOde;
    double sync_tol = 1e-3;
    double t_max = 150.0;
    double dt = 0.01;
    std::optional<SweepAxis> rows;  // absent: single row
    std::optional<SweepAxis> cols;  // absent: single column
    int jobs = 1;

    static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
    static ExperimentConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;
};

struct RunRecord {
    bool converged = false;
    bool failed = false;  // integration diverged; counted as unconverged
    double t_sync = -1.0;
    double energy = 0.0;
    double alpha_hat = 0.0;  // NaN when no fit was possible
    double r_squared = 0.0;
};

struct CellStats {
    double row_value = 0.0;
    double col_value = 0.0;
    int runs = 0;
    int converged_count = 0;
    double converged_fraction = 0.0;
    // means/stddev over the converged runs only; NaN when none converged
    double mean_t_sync = 0.0;
    double std_t_sync = 0.0;
    double mean_energy = 0.0;
    double mean_alpha_hat = 0.0;
    std::vector<RunRecord> records;
};

struct ExperimentReport {
    nlohmann::json config;  // resolved config; re-running it reproduces the report
    std::vector<double> row_values;
    std::vector<double> col_values;
    std::vector<CellStats> cells;  // row-major

    const CellStats& cell(std::size_t r, std::size_t c) const { return cells[r * col_values.size() + c]; }
    nlohmann::json to_json() const;
    /// One row per grid cell: row/col parameter values plus the aggregates.
    void write_csv(std::ostream& out) const;
    /// Text table shaped like the sweep grid, "(mean t, mean E)" per cell.
    std::string format_table() const;
};

/// Run the full grid: `runs` simulations per cell, seeded per run from the
/// master seed, aggregated per cell. Deterministic for a fixed config,
/// including under jobs > 1. A run that diverges numerically is recorded as
/// failed and the grid continues.
ExperimentReport run_grid(const ExperimentConfig& cfg);

struct DesyncCensus {
    int runs = 0;
    int unsynchronized = 0;
    double fraction = 0.0;
    nlohmann::json config;
};

/// Count runs that fail to synchronize by t_max (single-cell config).
DesyncCensus desync_census(const ExperimentConfig& cfg);

}  // namespace pcosync
