#include "pcosync/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace pcosync {

void vector_field_into(const Topology& topo, const PhaseResponseFunction& qg,
                       const PhaseResponseFunction& ql, const double* xi, double* out) {
    const int n = topo.n();
    const double inv_t = 1.0 / topo.period();
    const auto& gains = topo.global_gains();
    const auto& delta = topo.natural_freq_offsets();

    for (int i = 0; i < n; ++i) {
        out[i] = delta[i];
        if (gains[i] != 0.0) out[i] -= gains[i] * inv_t * qg(xi[i]);
    }
    const double w = topo.local_strength() * inv_t;
    if (w != 0.0) {
        for (auto [i, j] : topo.edges()) {
            const double v = w * ql(xi[i] - xi[j]);  // edge-wise, shared between both ends
            out[i] -= v;
            out[j] += v;
        }
    }
}

std::vector<double> vector_field(const Topology& topo, const PhaseResponseFunction& qg,
                                 const PhaseResponseFunction& ql, const std::vector<double>& xi) {
    if (static_cast<int>(xi.size()) != topo.n())
        throw std::invalid_argument("vector_field: state has length " + std::to_string(xi.size()) +
                                    ", topology has " + std::to_string(topo.n()) + " nodes");
    std::vector<double> out(xi.size());
    vector_field_into(topo, qg, ql, xi.data(), out.data());
    return out;
}

namespace {

void record_sample(Trajectory& traj, double t, const std::vector<double>& xi, bool states) {
    double s2 = 0.0, si = 0.0;
    for (double v : xi) {
        s2 += v * v;
        si = std::max(si, std::abs(v));
    }
    traj.times.push_back(t);
    traj.norm2.push_back(std::sqrt(s2));
    traj.norm_inf.push_back(si);
    if (states) traj.states.push_back(xi);
}

}  // namespace

Trajectory integrate(const Topology& topo, const PhaseResponseFunction& qg,
                     const PhaseResponseFunction& ql, const std::vector<double>& xi0,
                     const IntegrateOptions& opts) {
    if (static_cast<int>(xi0.size()) != topo.n())
        throw std::invalid_argument("integrate: initial state length does not match topology");
    if (!(opts.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(opts.sync_tol > 0.0)) throw std::invalid_argument("integrate: sync_tol must be positive");

    const int n = topo.n();
    const double period = topo.period();
    std::vector<double> xi = xi0;
    for (double& v : xi) v = wrap_to_pi(v);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    Trajectory traj;
    traj.dt = opts.dt;
    record_sample(traj, 0.0, xi, opts.record_states);

    double window_start = -1.0;  // time the sup-norm first dipped below tolerance
    auto update_window = [&](double t, double ni) -> bool {
        if (ni < opts.sync_tol) {
            if (window_start < 0.0) window_start = t;
            if (t - window_start >= period) {
                traj.converged = true;
                traj.t_sync = window_start;
                return true;
            }
        } else {
            window_start = -1.0;
        }
        return false;
    };

    {
        double ni = 0.0;
        for (double v : xi) ni = std::max(ni, std::abs(v));
        if (ni < opts.sync_tol) window_start = 0.0;
    }

    const long steps = static_cast<long>(std::ceil(opts.t_max / opts.dt));
    for (long step = 1; step <= steps; ++step) {
        const double h = opts.dt;
        vector_field_into(topo, qg, ql, xi.data(), k1.data());
        for (int i = 0; i < n; ++i) tmp[i] = xi[i] + 0.5 * h * k1[i];
        vector_field_into(topo, qg, ql, tmp.data(), k2.data());
        for (int i = 0; i < n; ++i) tmp[i] = xi[i] + 0.5 * h * k2[i];
        vector_field_into(topo, qg, ql, tmp.data(), k3.data());
        for (int i = 0; i < n; ++i) tmp[i] = xi[i] + h * k3[i];
        vector_field_into(topo, qg, ql, tmp.data(), k4.data());

        double ni = 0.0;
        bool finite = true;
        for (int i = 0; i < n; ++i) {
            double v = xi[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (v > kPi || v < -kPi) v = wrap_to_pi(v);
            xi[i] = v;
            finite &= std::isfinite(v);
            ni = std::max(ni, std::abs(v));
        }
        const double t = step * opts.dt;
        if (!finite) throw std::runtime_error("integrate: state became non-finite at t = " + std::to_string(t));

        if (step % opts.record_stride == 0) record_sample(traj, t, xi, opts.record_states);
        if (update_window(t, ni)) break;
    }
    return traj;
}

void Trajectory::write_csv(std::ostream& out) const {
    if (states.empty()) throw std::logic_error("Trajectory::write_csv: states were not recorded");
    const std::size_t n = states.front().size();
    out << "t";
    for (std::size_t i = 0; i < n; ++i) out << ",xi_" << i;
    out << ",norm2,norm_inf\n";
    out.precision(12);
    for (std::size_t s = 0; s < states.size(); ++s) {
        out << times[s];
        for (double v : states[s]) out << ',' << v;
        out << ',' << norm2[s] << ',' << norm_inf[s] << '\n';
    }
}

RateFit fit_rate(const Trajectory& traj, double t_start, double t_end) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_start || t > t_end) continue;
        if (!(traj.norm2[i] > 0.0))
            throw std::invalid_argument("fit_rate: norm vanishes inside the fit window");
        ts.push_back(t);
        ys.push_back(std::log(traj.norm2[i]));
    }
    if (ts.size() < 10)
        throw std::invalid_argument("fit_rate: need at least 10 samples in the window, got " +
                                    std::to_string(ts.size()));

    const double nsz = static_cast<double>(ts.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= nsz;
    ym /= nsz;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        sty += (ts[i] - tm) * (ys[i] - ym);
        syy += (ys[i] - ym) * (ys[i] - ym);
    }
    const double slope = sty / stt;
    const double intercept = ym - slope * tm;

    RateFit fit;
    fit.alpha_hat = -slope;
    fit.c_hat = std::exp(intercept) / traj.norm2.front();
    if (syy <= 0.0) {
        // constant log-norm: a zero-slope line fits exactly
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = (sty * sty) / (stt * syy);
    }
    return fit;
}

InvarianceReport check_invariance(const Topology& topo, const PhaseResponseFunction& qg,
                                  const PhaseResponseFunction& ql, double eps_bar, int samples,
                                  std::uint64_t seed) {
    if (!(eps_bar > 0.0) || eps_bar >= kPi)
        throw std::domain_error("check_invariance: eps_bar must be in (0, pi)");
    const int n = topo.n();
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };

    InvarianceReport rep;
    rep.samples = samples;
    std::vector<double> xi(n), dot(n);
    const double tol = 1e-12;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) xi[i] = uniform(-eps_bar, eps_bar);
        // pin between 1 and n coordinates to the boundary
        const int pins = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        for (int k = 0; k < pins; ++k) {
            const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            xi[i] = (rng() & 1) ? eps_bar : -eps_bar;
        }
        vector_field_into(topo, qg, ql, xi.data(), dot.data());
        for (int i = 0; i < n; ++i) {
            if (std::abs(xi[i]) != eps_bar) continue;
            const double outward = (xi[i] > 0.0) ? dot[i] : -dot[i];
            if (outward > tol)
                rep.violations.push_back({s, i, dot[i]});
            else if (outward > -tol)
                ++rep.boundary_cases;
        }
    }
    rep.passed = rep.violations.empty();
    return rep;
}

}  // namespace pcosync
