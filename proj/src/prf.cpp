#include "pcosync/prf.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pcosync {

PhaseResponseFunction PhaseResponseFunction::tanh_family(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("tanh PRF: epsilon must be positive, got " + std::to_string(epsilon));
    PhaseResponseFunction q;
    q.family_ = PrfFamily::Tanh;
    q.epsilon_ = epsilon;
    q.inv_tanh_pi_eps_ = 1.0 / std::tanh(kPi / epsilon);
    return q;
}

PhaseResponseFunction PhaseResponseFunction::sine(double amplitude) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw std::invalid_argument("sine PRF: amplitude must be positive");
    PhaseResponseFunction q;
    q.family_ = PrfFamily::Sine;
    q.amplitude_ = amplitude;
    return q;
}

PhaseResponseFunction PhaseResponseFunction::custom(std::vector<std::pair<double, double>> table) {
    if (table.size() < 3)
        throw std::invalid_argument("custom PRF: table needs at least 3 points, got " +
                                    std::to_string(table.size()));
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& [x, v] = table[i];
        if (!std::isfinite(x) || !std::isfinite(v))
            throw std::invalid_argument("custom PRF: non-finite table entry");
        if (x < -kPi || x > kPi)
            throw std::invalid_argument("custom PRF: angle outside [-pi, pi]: " + std::to_string(x));
        if (i > 0 && !(x > table[i - 1].first))
            throw std::invalid_argument("custom PRF: angles must be strictly increasing");
    }
    PhaseResponseFunction q;
    q.family_ = PrfFamily::Custom;
    q.table_ = std::move(table);
    return q;
}

PhaseResponseFunction PhaseResponseFunction::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("custom PRF: cannot open " + path);
    std::vector<std::pair<double, double>> table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, v;
        if (!(ss >> x >> v)) {
            if (first) { first = false; continue; }  // header row
            throw std::invalid_argument("custom PRF: malformed line in " + path + ": " + line);
        }
        first = false;
        table.emplace_back(x, v);
    }
    return custom(std::move(table));
}

double PhaseResponseFunction::interpolate(double x) const {
    // x is already in [-pi, pi]. Between the last and (first + 2*pi) point
    // the table wraps periodically.
    const auto& t = table_;
    if (x <= t.front().first) x += kTwoPi;  // interpolate across the wrap from the left end
    auto it = std::upper_bound(t.begin(), t.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    double x0, y0, x1, y1;
    if (it == t.begin()) {  // unreachable after the shift above, kept for safety
        x0 = t.back().first - kTwoPi; y0 = t.back().second;
        x1 = t.front().first;         y1 = t.front().second;
    } else if (it == t.end()) {
        x0 = t.back().first;          y0 = t.back().second;
        x1 = t.front().first + kTwoPi; y1 = t.front().second;
    } else {
        x0 = (it - 1)->first; y0 = (it - 1)->second;
        x1 = it->first;       y1 = it->second;
    }
    const double dx = x1 - x0;
    if (!(dx > 0.0)) return 0.5 * (y0 + y1);  // table spans the full circle, x sits on the seam
    const double w = (x - x0) / dx;
    return y0 + w * (y1 - y0);
}

double PhaseResponseFunction::slope_at_zero() const {
    switch (family_) {
        case PrfFamily::Tanh: return inv_tanh_pi_eps_ / epsilon_ - 1.0 / kPi;
        case PrfFamily::Sine: return amplitude_;
        case PrfFamily::Custom: {
            const double h = 1e-6;
            return ((*this)(h) - (*this)(-h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double PhaseResponseFunction::epsilon() const {
    if (family_ != PrfFamily::Tanh) throw std::logic_error("epsilon() is only defined for the tanh family");
    return epsilon_;
}

double PhaseResponseFunction::amplitude() const {
    if (family_ != PrfFamily::Sine) throw std::logic_error("amplitude() is only defined for the sine family");
    return amplitude_;
}

std::string PhaseResponseFunction::describe() const {
    std::ostringstream ss;
    switch (family_) {
        case PrfFamily::Tanh: ss << "tanh(eps=" << epsilon_ << ")"; break;
        case PrfFamily::Sine: ss << "sine(a=" << amplitude_ << ")"; break;
        case PrfFamily::Custom: ss << "custom(" << table_.size() << " points)"; break;
    }
    return ss.str();
}

AdmissibilityReport validate_admissibility(const PhaseResponseFunction& prf, int grid_points) {
    if (grid_points < 100) throw std::invalid_argument("validate_admissibility: grid_points must be >= 100");
    AdmissibilityReport rep;
    rep.grid_points = grid_points;
    rep.tolerance = prf.validation_tolerance();

    rep.zero_ok = std::abs(prf(0.0)) <= rep.tolerance;
    rep.odd_ok = true;
    rep.sign_ok = true;
    // interior grid over (-pi, pi); endpoints excluded (Q(pi) need not vanish
    // for a merely periodic function, and the sign condition is open there)
    for (int i = 0; i < grid_points; ++i) {
        const double x = -kPi + kTwoPi * (i + 1) / (grid_points + 1);
        if (std::abs(x) < 1e-12) continue;
        const double q = prf(x);
        if (std::abs(q + prf(-x)) > rep.tolerance) {
            rep.odd_ok = false;
            if (rep.odd_violations.size() < 32) rep.odd_violations.push_back(x);
        }
        if (!(q / x > 0.0)) {
            rep.sign_ok = false;
            if (rep.sign_violations.size() < 10000) rep.sign_violations.push_back(x);
        }
    }
    rep.passed = rep.zero_ok && rep.odd_ok && rep.sign_ok;
    return rep;
}

namespace {

// min/max of Q(x)/x over [lo, hi] on a dense grid; the x = 0 sample uses the
// slope limit.
void scan_ratio(const PhaseResponseFunction& q, double lo, double hi, int n, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
        const double r = (x == 0.0) ? q.slope_at_zero() : q(x) / x;
        mn = std::min(mn, r);
        mx = std::max(mx, r);
    }
}

void scan_value(const PhaseResponseFunction& q, double lo, double hi, int n, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
        const double v = q(x);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
}

}  // namespace

PrfBounds compute_bounds(const PhaseResponseFunction& qg, const PhaseResponseFunction& ql,
                         double eps_bar, int grid_points) {
    if (!(eps_bar >= 0.0) || eps_bar >= kPi)
        throw std::domain_error("compute_bounds: eps_bar must be in [0, pi), got " + std::to_string(eps_bar));
    if (grid_points < 1000) throw std::invalid_argument("compute_bounds: grid_points must be >= 1000");

    PrfBounds b;
    b.eps_bar = eps_bar;
    const int n = (eps_bar == 0.0) ? 1 : grid_points | 1;  // odd count puts a sample exactly at 0

    double mn, mx;
    scan_ratio(qg, -eps_bar, eps_bar, n, mn, mx);
    b.sigma1 = mn;
    b.sigma3 = mn;  // same extremum, used when eps_bar >= pi/2
    // Q_l ratios over the doubled interval; evaluation is through the
    // periodic extension but the denominator keeps the unreduced x.
    scan_ratio(ql, -2.0 * eps_bar, 2.0 * eps_bar, n, mn, mx);
    b.sigma2 = mn;
    b.sigma4 = -mn;  // max of -Q/x = -(min of Q/x)
    scan_value(qg, 0.0, eps_bar, (eps_bar == 0.0) ? 1 : grid_points, mn, mx);
    b.gamma1 = mn;
    scan_value(ql, 0.0, 2.0 * eps_bar, (eps_bar == 0.0) ? 1 : grid_points, mn, mx);
    b.gamma2 = -mn;  // max of -Q = -(min of Q)
    return b;
}

double tanh_ratio_derivative_numerator(double x, double eps) {
    return (2.0 * kPi * std::sinh(2.0 * x / eps) - 2.0 * x * std::sinh(2.0 * kPi / eps)) / x;
}

RateMonotonicityReport verify_tanh_rate_monotonicity(const std::vector<double>& eps_values, int x_grid) {
    if (x_grid < 1000) throw std::invalid_argument("verify_tanh_rate_monotonicity: x_grid must be >= 1000");
    RateMonotonicityReport rep;
    rep.x_grid = x_grid;
    rep.ratio_samples = 100;
    rep.ratio_strict_min = rep.ratio_samples;
    for (double eps : eps_values) {
        if (!(eps > 0.0)) throw std::invalid_argument("verify_tanh_rate_monotonicity: eps must be positive");
        for (int i = 0; i < x_grid; ++i) {
            const double x = -kPi + kTwoPi * (i + 1) / (x_grid + 1);
            if (std::abs(x) < 1e-12) continue;
            const double f = tanh_ratio_derivative_numerator(x, eps);
            if (!(f < 0.0) && rep.f_violations.size() < 64) rep.f_violations.push_back({eps, x, f});
        }
        // the ratio must not grow when eps grows by a relative step of 1e-3;
        // strict decreases are counted (tanh saturation can tie the doubles)
        const auto qa = PhaseResponseFunction::tanh_family(eps);
        const auto qb = PhaseResponseFunction::tanh_family(eps * (1.0 + 1e-3));
        int strict = 0;
        for (int i = 1; i <= rep.ratio_samples; ++i) {
            const double x = kPi * i / (rep.ratio_samples + 1.0);
            const double ra = qa(x) / x, rb = qb(x) / x;
            if (rb > ra && rep.ratio_violations.size() < 64) rep.ratio_violations.push_back({eps, x, rb - ra});
            if (ra > rb) ++strict;
        }
        rep.ratio_strict_min = std::min(rep.ratio_strict_min, strict);
    }
    rep.passed = rep.f_violations.empty() && rep.ratio_violations.empty() && rep.ratio_strict_min > 0;
    return rep;
}

}  // namespace pcosync
