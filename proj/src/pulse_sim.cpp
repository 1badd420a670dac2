#include "pcosync/pulse_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcosync {

PulseNetwork PulseNetwork::from_deviations(Topology topo, PhaseResponseFunction qg,
                                           PhaseResponseFunction ql, const std::vector<double>& xi0,
                                           EnergyConfig energy) {
    if (static_cast<int>(xi0.size()) != topo.n())
        throw std::invalid_argument("pulse sim: initial deviations do not match topology size");
    PulseNetwork net{.topo = std::move(topo), .qg = std::move(qg), .ql = std::move(ql)};
    net.phases.reserve(xi0.size());
    for (double xi : xi0) net.phases.push_back(wrap_to_2pi(xi));
    net.pulse_count.assign(xi0.size(), 0);
    net.energy_cfg = energy;
    return net;
}

namespace {

struct SyncWindow {
    double start = -1.0;
    std::vector<long> pulse_snapshot;

    void update(double t, double metric, double tol, const std::vector<long>& pulses) {
        if (metric < tol) {
            if (start < 0.0) {
                start = t;
                pulse_snapshot = pulses;
            }
        } else {
            start = -1.0;
        }
    }
    bool confirmed(double t, double period) const { return start >= 0.0 && t - start >= period; }
};

}  // namespace

PulseResult run_pulse_sim(PulseNetwork net, double t_max, double sync_tol) {
    if (!(sync_tol > 0.0)) throw std::invalid_argument("pulse sim: sync_tol must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("pulse sim: t_max must be nonnegative");

    const int n = net.topo.n();
    const double period = net.topo.period();
    const double omega_cue = kTwoPi / period;
    std::vector<double> omega(n);
    for (int i = 0; i < n; ++i) {
        omega[i] = omega_cue + net.topo.natural_freq_offsets()[i];
        if (!(omega[i] > 0.0)) throw std::invalid_argument("pulse sim: node natural frequency must be positive");
    }
    const auto& gains = net.topo.global_gains();
    const double l = net.topo.local_strength();

    PulseResult res;
    auto metric = [&]() {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(wrap_to_pi(net.phases[i] - net.cue_phase)));
        return m;
    };
    auto record_trace = [&]() {
        std::vector<double> xi(n);
        double s2 = 0.0, si = 0.0;
        for (int i = 0; i < n; ++i) {
            xi[i] = wrap_to_pi(net.phases[i] - net.cue_phase);
            s2 += xi[i] * xi[i];
            si = std::max(si, std::abs(xi[i]));
        }
        res.trace.times.push_back(net.clock);
        res.trace.norm2.push_back(std::sqrt(s2));
        res.trace.norm_inf.push_back(si);
        res.trace.states.push_back(std::move(xi));
    };

    SyncWindow window;
    record_trace();
    window.update(net.clock, metric(), sync_tol, net.pulse_count);

    // deliver one oscillator's pulse to a receiver; senders sit at phase 0.
    // Nodes firing in the current pass neither receive (their phase is at
    // the reset point, where Q vanishes) nor fire twice.
    std::vector<char> fires_this_pass(n, 0);
    std::vector<int> queue;
    auto receive = [&](int i, double coupling, const PhaseResponseFunction& q) {
        if (coupling == 0.0 || fires_this_pass[i]) return;
        const double shifted = net.phases[i] + coupling * q(-net.phases[i]);
        if (shifted >= kTwoPi) {
            // absorbed: the pulse drives the receiver across its own firing
            // threshold within the same pass
            net.phases[i] = kTwoPi;
            fires_this_pass[i] = 1;
            queue.push_back(i);
        } else {
            net.phases[i] = std::max(shifted, 0.0);
        }
    };

    const long max_events = static_cast<long>((t_max / period + 2.0) * (n + 2) * 8.0) + 64;
    while (net.clock < t_max) {
        // time to the next firing
        double dt = (kTwoPi - net.cue_phase) / omega_cue;
        for (int i = 0; i < n; ++i) dt = std::min(dt, (kTwoPi - net.phases[i]) / omega[i]);

        if (net.clock + dt > t_max) {
            const double rest = t_max - net.clock;
            net.cue_phase += omega_cue * rest;
            for (int i = 0; i < n; ++i) net.phases[i] += omega[i] * rest;
            net.clock = t_max;
            window.update(net.clock, metric(), sync_tol, net.pulse_count);
            break;
        }

        const bool cue_fires = ((kTwoPi - net.cue_phase) / omega_cue) <= dt;
        net.cue_phase = cue_fires ? kTwoPi : net.cue_phase + omega_cue * dt;
        std::fill(fires_this_pass.begin(), fires_this_pass.end(), 0);
        queue.clear();
        for (int i = 0; i < n; ++i) {
            if ((kTwoPi - net.phases[i]) / omega[i] <= dt) {
                net.phases[i] = kTwoPi;
                fires_this_pass[i] = 1;
                queue.push_back(i);
            } else {
                net.phases[i] += omega[i] * dt;
            }
        }
        net.clock += dt;

        if (cue_fires) {
            net.cue_phase = 0.0;
            ++net.cue_pulse_count;
            for (int i = 0; i < n; ++i) receive(i, gains[i], net.qg);
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int s = queue[qi];
            net.phases[s] = 0.0;
            ++net.pulse_count[s];
            for (const int* p = net.topo.neighbors_begin(s); p != net.topo.neighbors_end(s); ++p)
                receive(*p, l, net.ql);
        }
        ++res.events;
        if (res.events > max_events)
            throw std::runtime_error("pulse sim: event budget exceeded (runaway firing cascade)");

        window.update(net.clock, metric(), sync_tol, net.pulse_count);
        if (cue_fires) record_trace();
        if (window.confirmed(net.clock, period)) break;
    }

    res.converged = window.confirmed(net.clock, period);
    const auto& cfg = net.energy_cfg;
    if (res.converged) {
        res.t_sync = window.start;
        res.elapsed = window.start;
        res.pulse_totals = window.pulse_snapshot;
    } else {
        res.t_sync = -1.0;
        res.elapsed = net.clock;
        res.pulse_totals = net.pulse_count;
    }
    long pulses = 0;
    for (long c : res.pulse_totals) pulses += c;
    res.energy = pulses * cfg.per_pulse_energy + res.elapsed * cfg.idle_power_per_node * n;
    res.cue_pulses = net.cue_pulse_count;
    res.trace.converged = res.converged;
    res.trace.t_sync = res.t_sync;
    res.final_phases = net.phases;
    res.final_cue_phase = net.cue_phase;
    return res;
}

}  // namespace pcosync
