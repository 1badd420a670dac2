#include "pcosync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pcosync {

EigenResult symmetric_eigen(const Matrix& a, bool with_vectors) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("symmetric_eigen: matrix must be square");
    const double scale = a.max_abs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * std::max(1.0, scale))
                throw std::invalid_argument("symmetric_eigen: matrix is not symmetric");

    Matrix w = a;
    Matrix v = with_vectors ? Matrix::identity(n) : Matrix();

    // Cyclic Jacobi: sweep the upper triangle, rotating each off-diagonal
    // element to zero, until the off-diagonal mass is negligible.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += w(p, q) * w(p, q);
        if (off <= 1e-26 * std::max(1.0, scale * scale)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p), wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k), wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                if (with_vectors)
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
            }
        }
    }

    EigenResult res;
    res.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = w(i, i);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return res.eigenvalues[i] < res.eigenvalues[j]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = res.eigenvalues[order[i]];
    res.eigenvalues = std::move(sorted);
    if (with_vectors) {
        res.eigenvectors = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, j) = v(i, order[j]);
    }
    return res;
}

namespace {

nlohmann::json bounds_json(const PrfBounds& b) {
    return {{"eps_bar", b.eps_bar}, {"sigma1", b.sigma1}, {"sigma2", b.sigma2}, {"sigma3", b.sigma3},
            {"sigma4", b.sigma4},   {"gamma1", b.gamma1}, {"gamma2", b.gamma2}};
}

}  // namespace

nlohmann::json RateBounds::to_json() const {
    nlohmann::json j;
    j["regime"] = regime == RateRegime::InsideHalfPi ? "inside_half_pi" : "outside_half_pi";
    if (regime == RateRegime::InsideHalfPi) {
        j["alpha1"] = alpha1;
        j["lambda_min"] = lambda_min;
    } else {
        j["alpha2"] = alpha2;
        j["lambda_max"] = lambda_max;
        j["g_min"] = g_min;
    }
    j["guarantee_applicable"] = guarantee_applicable;
    j["prf_bounds"] = bounds_json(prf_bounds);
    return j;
}

RateBounds inner_rate_bound(const Topology& topo, const PhaseResponseFunction& qg,
                            const PhaseResponseFunction& ql, double eps_bar, int grid_points) {
    if (!(eps_bar >= 0.0) || eps_bar >= kPi / 2.0)
        throw std::domain_error("inner_rate_bound: eps_bar must be in [0, pi/2)");
    RateBounds rb;
    rb.regime = RateRegime::InsideHalfPi;
    rb.prf_bounds = compute_bounds(qg, ql, eps_bar, grid_points);

    const int n = topo.n();
    Matrix m = laplacian(topo);
    const double scale = rb.prf_bounds.sigma2 * topo.local_strength();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) *= scale;
        m(i, i) += rb.prf_bounds.sigma1 * topo.global_gains()[i];
    }
    rb.lambda_min = symmetric_eigen(m).eigenvalues.front();
    rb.alpha1 = rb.lambda_min / topo.period();
    rb.g_min = topo.min_gain();
    const auto cond = check_inner_sync_conditions(topo);
    rb.guarantee_applicable = cond.passed;
    return rb;
}

RateBounds outer_rate_bound(const Topology& topo, const PhaseResponseFunction& qg,
                            const PhaseResponseFunction& ql, double eps_bar, int grid_points) {
    if (!(eps_bar >= kPi / 2.0) || eps_bar >= kPi)
        throw std::domain_error("outer_rate_bound: eps_bar must be in [pi/2, pi)");
    RateBounds rb;
    rb.regime = RateRegime::OutsideHalfPi;
    rb.prf_bounds = compute_bounds(qg, ql, eps_bar, grid_points);
    rb.lambda_max = symmetric_eigen(laplacian(topo)).eigenvalues.back();
    rb.g_min = topo.min_gain();
    rb.alpha2 = (rb.prf_bounds.sigma3 * rb.g_min -
                 rb.prf_bounds.sigma4 * topo.local_strength() * rb.lambda_max) /
                topo.period();
    rb.guarantee_applicable =
        check_outer_sync_conditions(topo, qg, ql, eps_bar, grid_points).passed && rb.alpha2 > 0.0;
    return rb;
}

InnerConditionsReport check_inner_sync_conditions(const Topology& topo) {
    InnerConditionsReport r;
    r.connected = is_connected(topo);
    r.has_positive_gain = topo.max_gain() > 0.0;
    r.passed = r.connected && r.has_positive_gain;
    return r;
}

nlohmann::json OuterConditionsReport::to_json() const {
    return {{"gain_dominance_pass", gain_dominance_pass},
            {"gain_dominance_margin", gain_dominance_margin},
            {"invariance_applicable", invariance_applicable},
            {"invariance_pass", invariance_pass},
            {"invariance_min_margin", invariance_min_margin},
            {"invariance_worst_node", invariance_worst_node},
            {"lambda_max", lambda_max},
            {"prf_bounds", bounds_json(prf_bounds)},
            {"passed", passed}};
}

OuterConditionsReport check_outer_sync_conditions(const Topology& topo, const PhaseResponseFunction& qg,
                                                  const PhaseResponseFunction& ql, double eps_bar,
                                                  int grid_points) {
    if (!(eps_bar >= kPi / 2.0) || eps_bar >= kPi)
        throw std::domain_error("check_outer_sync_conditions: eps_bar must be in [pi/2, pi)");
    OuterConditionsReport r;
    r.prf_bounds = compute_bounds(qg, ql, eps_bar, grid_points);
    r.lambda_max = symmetric_eigen(laplacian(topo)).eigenvalues.back();
    const double l = topo.local_strength();
    const double g_min = topo.min_gain();

    // g_min must dominate the worst-case local pull. sigma3 > 0 for any
    // admissible cue PRF, but guard anyway.
    if (r.prf_bounds.sigma3 > 0.0) {
        const double rhs = r.prf_bounds.sigma4 * l * r.lambda_max / r.prf_bounds.sigma3;
        r.gain_dominance_margin = g_min - rhs;
        r.gain_dominance_pass = g_min > rhs;
    }

    // Per-node invariance condition g_i >= (l / gamma1) * deg(i) * gamma2.
    // When the right-hand side is identically zero the condition holds
    // regardless of gamma1; otherwise gamma1 <= 0 makes it inapplicable
    // (gamma1 = 0 for any PRF vanishing at 0, so this guard is the common
    // path for nonzero local coupling).
    r.invariance_applicable = true;
    r.invariance_pass = true;
    r.invariance_min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < topo.n(); ++i) {
        const double rhs_num = l * r.prf_bounds.gamma2 * topo.degree(i);
        double margin;
        if (rhs_num <= 0.0) {
            margin = topo.global_gains()[i];
        } else if (r.prf_bounds.gamma1 <= 0.0) {
            r.invariance_applicable = false;
            r.invariance_pass = false;
            r.invariance_worst_node = i;
            break;
        } else {
            margin = topo.global_gains()[i] - rhs_num / r.prf_bounds.gamma1;
        }
        if (margin < r.invariance_min_margin) {
            r.invariance_min_margin = margin;
            r.invariance_worst_node = i;
        }
        if (margin < 0.0) r.invariance_pass = false;
    }
    if (!r.invariance_applicable) r.invariance_min_margin = std::numeric_limits<double>::quiet_NaN();
    r.passed = r.gain_dominance_pass && r.invariance_applicable && r.invariance_pass;
    return r;
}

double leaderless_rate_bound(const Topology& topo, const PhaseResponseFunction& ql, double eps_bar,
                             int grid_points) {
    if (!(eps_bar >= 0.0) || eps_bar >= kPi / 2.0)
        throw std::domain_error("leaderless_rate_bound: eps_bar must be in [0, pi/2)");
    const PrfBounds b = compute_bounds(ql, ql, eps_bar, grid_points);
    const auto eig = symmetric_eigen(laplacian(topo));
    return b.sigma2 * topo.local_strength() * eig.eigenvalues[1] / topo.period();
}

MonotonicitySweep rate_monotonicity_sweep(const Topology& topo, const PhaseResponseFunction& qg,
                                          const PhaseResponseFunction& ql, double eps_bar,
                                          const std::vector<double>& gain_scales,
                                          const std::vector<double>& eps_descending, int grid_points) {
    MonotonicitySweep sw;
    sw.gain_scales = gain_scales;
    sw.eps_values = eps_descending;

    auto nondecreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1] - 1e-12) return false;
        return true;
    };

    for (double s : gain_scales) {
        if (!(s >= 0.0)) throw std::invalid_argument("rate_monotonicity_sweep: gain scales must be >= 0");
        auto gains = topo.global_gains();
        for (double& g : gains) g *= s;
        sw.alpha_by_gain_scale.push_back(
            inner_rate_bound(topo.with_gains(std::move(gains)), qg, ql, eps_bar, grid_points).alpha1);
    }
    sw.monotone_in_gain = nondecreasing(sw.alpha_by_gain_scale);

    for (double eps : eps_descending)
        sw.alpha_by_eps.push_back(
            inner_rate_bound(topo, PhaseResponseFunction::tanh_family(eps), ql, eps_bar, grid_points).alpha1);
    sw.monotone_in_eps = nondecreasing(sw.alpha_by_eps);

    sw.passed = sw.monotone_in_gain && sw.monotone_in_eps;
    return sw;
}

}  // namespace pcosync
