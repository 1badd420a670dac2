#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

/// Phase deviations from the global cue plus the simulation clock.
struct PhaseState {
    std::vector<double> xi;  // radians, each in [-pi, pi]
    double t = 0.0;          // seconds
};

/// Right-hand side of the averaged deviation dynamics:
///   dxi_i/dt = Delta_i - (g_i/T) Q_g(xi_i) + (l/T) sum_j a_ij Q_l(xi_j - xi_i)
/// evaluated edge-wise (the matrix form -(1/T) G Q_g(xi) - (l/T) B Q_l(B^T xi)
/// when all Delta_i = 0). Throws on dimension mismatch.
std::vector<double> vector_field(const Topology& topo, const PhaseResponseFunction& qg,
                                 const PhaseResponseFunction& ql, const std::vector<double>& xi);

/// In-place variant used by the integrator; no allocation.
void vector_field_into(const Topology& topo, const PhaseResponseFunction& qg,
                       const PhaseResponseFunction& ql, const double* xi, double* out);

struct IntegrateOptions {
    double dt = 0.01;        // seconds; dt <= T/100 recommended
    double t_max = 150.0;    // seconds
    double sync_tol = 1e-3;  // radians, sup-norm threshold
    int record_stride = 1;   // sample norms/states every k-th step
    bool record_states = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> norm2;
    std::vector<double> norm_inf;
    std::vector<std::vector<double>> states;  // empty unless recorded
    bool converged = false;
    double t_sync = -1.0;  // start of the first window where the sup-norm
                           // stayed below sync_tol for one full period
    double dt = 0.0;

    /// CSV rows: t, xi_0..xi_{N-1}, norm2, norm_inf (states must be recorded).
    void write_csv(std::ostream& out) const;
};

/// Fixed-step classical 4th-order integration of the averaged dynamics.
/// Deviations are wrapped into [-pi, pi] after every step. Terminates at the
/// first time the sup-norm of the deviations stays below sync_tol for one
/// full period, or at t_max. Throws std::runtime_error if the state stops
/// being finite.
Trajectory integrate(const Topology& topo, const PhaseResponseFunction& qg,
                     const PhaseResponseFunction& ql, const std::vector<double>& xi0,
                     const IntegrateOptions& opts);

inline Trajectory integrate(const Topology& topo, const PhaseResponseFunction& qg,
                            const PhaseResponseFunction& ql, const std::vector<double>& xi0, double dt,
                            double t_max, double sync_tol) {
    return integrate(topo, qg, ql, xi0, IntegrateOptions{dt, t_max, sync_tol, 1, true});
}

/// Exponential-decay fit of a trajectory's Euclidean norm.
struct RateFit {
    double alpha_hat = 0.0;  // decay rate, 1/s (negated slope of the log fit)
    double c_hat = 0.0;      // prefactor relative to the initial norm
    double r_squared = 0.0;
};

/// Least-squares line through (t, log ||xi(t)||_2) on [t_start, t_end].
/// Requires at least 10 samples in the window and positive norms throughout.
RateFit fit_rate(const Trajectory& traj, double t_start, double t_end);

/// Boundary check of positive invariance for the box [-eps_bar, eps_bar]^N:
/// samples random states with at least one coordinate pinned to the boundary
/// and verifies that the vector field points inward there. A derivative of
/// zero at the boundary is counted separately as a grazing case, not a
/// violation.
struct InvarianceReport {
    struct Violation {
        int sample;
        int node;
        double xi_dot;
    };
    int samples = 0;
    int boundary_cases = 0;  // |xi_dot| below tolerance at a pinned coordinate
    std::vector<Violation> violations;
    bool passed = false;
};
InvarianceReport check_invariance(const Topology& topo, const PhaseResponseFunction& qg,
                                  const PhaseResponseFunction& ql, double eps_bar, int samples,
                                  std::uint64_t seed = 7);

}  // namespace pcosync
