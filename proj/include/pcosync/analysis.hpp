#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pcosync/matrix.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

struct EigenResult {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // columns match eigenvalues; empty unless requested
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Accurate to ~1e-10 * ||A|| for the moderate sizes used here (N <= 200).
/// Throws std::invalid_argument if the input is not symmetric within
/// 1e-10 * max|A_ij|.
EigenResult symmetric_eigen(const Matrix& a, bool with_vectors = false);

enum class RateRegime { InsideHalfPi, OutsideHalfPi };

/// The guaranteed exponential rate for one regime, together with every
/// constant that went into it, so reports can be audited.
struct RateBounds {
    RateRegime regime = RateRegime::InsideHalfPi;
    double alpha1 = 0.0;  // lambda_min(sigma1 G + sigma2 l B B^T) / T   (inner regime)
    double alpha2 = 0.0;  // (sigma3 g_min - sigma4 l lambda_max(B B^T)) / T   (outer regime)
    PrfBounds prf_bounds;
    double lambda_min = 0.0;  // of sigma1 G + sigma2 l L (inner regime)
    double lambda_max = 0.0;  // of L (outer regime)
    double g_min = 0.0;
    /// Whether the hypotheses behind the regime's guarantee hold (inner:
    /// connected graph and at least one positive gain; outer: the coupling
    /// inequalities). The bound value is reported either way.
    bool guarantee_applicable = false;

    nlohmann::json to_json() const;
};

/// Rate bound for deviations confined to [-eps_bar, eps_bar]^N with
/// eps_bar < pi/2. Throws std::domain_error outside that range.
RateBounds inner_rate_bound(const Topology& topo, const PhaseResponseFunction& qg,
                            const PhaseResponseFunction& ql, double eps_bar, int grid_points = 10000);

/// Rate bound for eps_bar in [pi/2, pi). A nonpositive alpha2 is reported,
/// not an error: it signals that the sufficient conditions give no guarantee.
RateBounds outer_rate_bound(const Topology& topo, const PhaseResponseFunction& qg,
                            const PhaseResponseFunction& ql, double eps_bar, int grid_points = 10000);

/// Sufficient conditions for synchronization from deviations inside
/// (-pi/2, pi/2): connected local graph and at least one positive gain.
struct InnerConditionsReport {
    bool connected = false;
    bool has_positive_gain = false;
    bool passed = false;
};
InnerConditionsReport check_inner_sync_conditions(const Topology& topo);

/// Sufficient conditions for synchronization when some deviation may lie
/// outside (-pi/2, pi/2): every node coupled to the cue strongly enough to
/// dominate the worst local pull. Margins are reported numerically; the
/// conditions are sufficient, not necessary, so a failed margin does not
/// mean desynchronization.
struct OuterConditionsReport {
    bool gain_dominance_pass = false;   // g_min > sigma4 l lambda_max / sigma3
    double gain_dominance_margin = 0.0; // g_min - rhs
    bool invariance_applicable = false; // false when gamma1 <= 0 with a nonzero rhs (division guard)
    bool invariance_pass = false;       // g_i >= (l / gamma1) * degree(i) * gamma2 for all i
    double invariance_min_margin = 0.0;
    int invariance_worst_node = -1;
    PrfBounds prf_bounds;
    double lambda_max = 0.0;
    bool passed = false;

    nlohmann::json to_json() const;
};
OuterConditionsReport check_outer_sync_conditions(const Topology& topo, const PhaseResponseFunction& qg,
                                                  const PhaseResponseFunction& ql, double eps_bar,
                                                  int grid_points = 10000);

/// Experimental: rate bound for a leaderless network (all gains zero),
/// measured against the mean phase instead of a cue. On the mean-zero
/// subspace the quadratic form reduces to sigma2 * l * B B^T, so the bound
/// is its second-smallest eigenvalue over T. Positive iff the graph is
/// connected.
double leaderless_rate_bound(const Topology& topo, const PhaseResponseFunction& ql, double eps_bar,
                             int grid_points = 10000);

/// Monotonicity sweep of the inner rate bound: along increasing uniform
/// scalings of the gain vector, and along a descending list of tanh-family
/// eps values for the cue PRF. The bound should be nondecreasing in both.
struct MonotonicitySweep {
    std::vector<double> gain_scales;
    std::vector<double> alpha_by_gain_scale;
    bool monotone_in_gain = false;
    std::vector<double> eps_values;  // descending
    std::vector<double> alpha_by_eps;
    bool monotone_in_eps = false;
    bool passed = false;
};
MonotonicitySweep rate_monotonicity_sweep(const Topology& topo, const PhaseResponseFunction& qg,
                                          const PhaseResponseFunction& ql, double eps_bar,
                                          const std::vector<double>& gain_scales,
                                          const std::vector<double>& eps_descending,
                                          int grid_points = 10000);

}  // namespace pcosync
