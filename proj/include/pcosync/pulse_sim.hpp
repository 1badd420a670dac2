#pragma once

#include <vector>

#include "pcosync/dynamics.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

struct EnergyConfig {
    double per_pulse_energy = 1e-5;      // joules per transmitted pulse
    double idle_power_per_node = 1e-4;   // watts drawn by every node while unsynchronized
};

/// Phase-level state of the pulse-coupled network: the global cue plus N
/// nodes, each a phase in [0, 2*pi) advancing at its natural rate between
/// firing events.
struct PulseNetwork {
    Topology topo;
    PhaseResponseFunction qg;
    PhaseResponseFunction ql;
    double cue_phase = 0.0;
    std::vector<double> phases;
    double clock = 0.0;
    std::vector<long> pulse_count;
    long cue_pulse_count = 0;
    EnergyConfig energy_cfg;

    /// Start the cue at phase 0 and place node i at the phase corresponding
    /// to deviation xi0[i].
    static PulseNetwork from_deviations(Topology topo, PhaseResponseFunction qg, PhaseResponseFunction ql,
                                        const std::vector<double>& xi0, EnergyConfig energy = {});
};

struct PulseResult {
    bool converged = false;
    double t_sync = -1.0;      // start of the sustained in-sync window
    double elapsed = 0.0;      // t_sync when converged, t_max otherwise
    double energy = 0.0;       // node pulses * per_pulse + elapsed * idle * N
    std::vector<long> pulse_totals;  // per node, up to `elapsed`
    long cue_pulses = 0;
    long events = 0;
    /// Deviation samples taken at t = 0 and after every cue firing; states
    /// are always recorded, so this plugs directly into fit_rate/write_csv.
    Trajectory trace;
    std::vector<double> final_phases;
    double final_cue_phase = 0.0;
};

/// Event-driven simulation of the pulse-coupled model at the phase level.
/// Between events every phase advances at its natural rate; when an
/// oscillator reaches 2*pi it fires, resets to 0, and each neighbor i jumps
/// by g_i*Q_g(-theta_i) (cue pulse) or l*a_ij*Q_l(-theta_i) (node pulse),
/// the sender sitting at phase 0 at the firing instant. Simultaneous
/// firings are processed cue first, then ascending node index. A jump that
/// pushes a phase past 2*pi fires that node in the same pass; a jump below
/// 0 clamps to 0. Synchronization is declared when the largest circular
/// distance to the cue stays below sync_tol for one full period.
///
/// Energy accounting covers the N nodes only (the cue is the reference,
/// not a consumer) and stops at t_sync once synchronization is reached.
PulseResult run_pulse_sim(PulseNetwork net, double t_max, double sync_tol);

}  // namespace pcosync
