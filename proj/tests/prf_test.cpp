#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "pcosync/prf.hpp"

using namespace pcosync;

namespace {

// Brute-force extremum of Q(x)/x on [lo, hi], independent of compute_bounds'
// grid layout (denser grid, no slope substitution except exactly at 0).
double brute_min_ratio(const PhaseResponseFunction& q, double lo, double hi, int n = 40001) {
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double r = (x == 0.0) ? q.slope_at_zero() : q(x) / x;
        mn = std::min(mn, r);
    }
    return mn;
}

// symmetric sampling grid: the interpolant of an odd function stays odd
std::vector<std::pair<double, double>> sampled_table(double (*f)(double), double spacing) {
    std::vector<double> xs{0.0};
    for (double x = spacing; x < kPi; x += spacing) xs.push_back(x);
    xs.push_back(kPi);
    std::vector<std::pair<double, double>> t;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        if (*it != 0.0) t.emplace_back(-*it, f(-*it));
    for (double x : xs) t.emplace_back(x, f(x));
    return t;
}

}  // namespace

TEST_CASE("tanh family point values") {
    const auto q04 = PhaseResponseFunction::tanh_family(0.4);
    CHECK(q04(0.0) == 0.0);
    CHECK(q04(kPi) == doctest::Approx(0.0).epsilon(1e-12));
    // high-precision reference evaluations (mpmath, 50 digits)
    const auto q16 = PhaseResponseFunction::tanh_family(1.6);
    CHECK(q16(kPi / 2) == doctest::Approx(0.2841234091428373).epsilon(1e-12));
    CHECK(q04(kPi / 2) == doctest::Approx(0.4992241960482209).epsilon(1e-12));
}

TEST_CASE("evaluation reduces the argument modulo 2*pi") {
    const auto q = PhaseResponseFunction::tanh_family(0.8);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const double x = ((rng() >> 11) * 0x1.0p-53 - 0.5) * 2.0 * kPi;
        CHECK(q(x + kTwoPi) == doctest::Approx(q(x)).epsilon(1e-13));
        CHECK(q(x - 3 * kTwoPi) == doctest::Approx(q(x)).epsilon(1e-13));
    }
}

TEST_CASE("slope at zero") {
    CHECK(PhaseResponseFunction::tanh_family(1.6).slope_at_zero() ==
          doctest::Approx(0.3318137121157432).epsilon(1e-12));  // 1/(1.6 tanh(pi/1.6)) - 1/pi
    CHECK(PhaseResponseFunction::tanh_family(0.4).slope_at_zero() ==
          doctest::Approx(2.1816908673249606).epsilon(1e-12));
    CHECK(PhaseResponseFunction::sine(1.0).slope_at_zero() == doctest::Approx(1.0));

    // finite-difference slope of a dense sin table
    const auto table = PhaseResponseFunction::custom(sampled_table([](double x) { return std::sin(x); }, 1e-3));
    CHECK(table.slope_at_zero() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("slope at zero decreases with eps for the tanh family") {
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
        const double s = PhaseResponseFunction::tanh_family(eps).slope_at_zero();
        CHECK(s > 0.0);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("admissibility of the standard families") {
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
        const auto rep = validate_admissibility(PhaseResponseFunction::tanh_family(eps), 10000);
        CHECK(rep.passed);
    }
    CHECK(validate_admissibility(PhaseResponseFunction::sine(1.0), 10000).passed);
}

TEST_CASE("sign-flipped PRF fails the sign condition everywhere") {
    const auto bad = PhaseResponseFunction::custom(sampled_table([](double x) { return -std::sin(x); }, 1e-2));
    const auto rep = validate_admissibility(bad, 1000);
    CHECK_FALSE(rep.passed);
    CHECK(rep.zero_ok);
    CHECK(rep.odd_ok);
    CHECK_FALSE(rep.sign_ok);
    // sign is wrong on essentially the whole grid
    CHECK(rep.sign_violations.size() > 900);
}

TEST_CASE("x * Q(x) > 0 on a dense grid for admissible PRFs") {
    const std::vector<PhaseResponseFunction> prfs = {
        PhaseResponseFunction::tanh_family(0.05), PhaseResponseFunction::tanh_family(1.6),
        PhaseResponseFunction::sine(0.5),
        PhaseResponseFunction::custom(sampled_table([](double x) { return std::sin(x); }, 1e-2))};
    for (const auto& q : prfs) {
        for (int i = 0; i < 10000; ++i) {
            const double x = -kPi + kTwoPi * (i + 1) / 10001.0;
            if (std::abs(x) < 1e-9) continue;
            REQUIRE(x * q(x) > 0.0);
        }
    }
}

TEST_CASE("custom table validation") {
    CHECK_THROWS_AS(PhaseResponseFunction::custom({{0.0, 0.0}, {1.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseResponseFunction::custom({{0.0, 0.0}, {1.0, 0.5}, {0.5, 0.2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PhaseResponseFunction::custom({{-4.0, 0.0}, {0.0, 0.0}, {1.0, 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("custom CSV round trip, header optional") {
    const char* path = "prf_test_table.csv";
    {
        std::ofstream out(path);
        out << "angle_rad,value\n";
        out.precision(17);
        for (auto [x, v] : sampled_table([](double x) { return 0.5 * std::sin(x); }, 0.01))
            out << x << "," << v << "\n";
    }
    const auto q = PhaseResponseFunction::from_csv(path);
    CHECK(q(0.7) == doctest::Approx(0.5 * std::sin(0.7)).epsilon(1e-4));
    CHECK(validate_admissibility(q, 1000).passed);
    std::remove(path);
}

TEST_CASE("bounds: sine endpoint extrema") {
    const auto s = PhaseResponseFunction::sine(1.0);
    SUBCASE("sigma1 at eps_bar = pi/2 is 2/pi") {
        const auto b = compute_bounds(s, s, kPi / 2, 10000);
        CHECK(b.sigma1 == doctest::Approx(2.0 / kPi).epsilon(1e-6));
        CHECK(brute_min_ratio(s, -kPi / 2, kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-9));
    }
    SUBCASE("sigma4 at eps_bar = 3*pi/4 comes from the periodic extension") {
        const auto b = compute_bounds(s, s, 3 * kPi / 4, 10000);
        // brute force over [-3pi/2, 3pi/2]: the max of -sin(x)/x sits at the
        // interior critical point tan(x) = x (x ~ 4.4934), above the
        // endpoint value 2/(3*pi)
        const double expect = 0.21723362821122166;  // -sin(x*)/x*, x* = 4.493409457909064
        CHECK(b.sigma4 == doctest::Approx(expect).epsilon(1e-6));
        CHECK(-brute_min_ratio(s, -1.5 * kPi, 1.5 * kPi) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(b.sigma4 > 2.0 / (3.0 * kPi));
    }
}

TEST_CASE("bounds: degenerate interval reduces to the slopes") {
    const auto qg = PhaseResponseFunction::tanh_family(0.4);
    const auto ql = PhaseResponseFunction::tanh_family(1.6);
    const auto b = compute_bounds(qg, ql, 0.0, 10000);
    CHECK(b.sigma1 == doctest::Approx(qg.slope_at_zero()));
    CHECK(b.sigma2 == doctest::Approx(ql.slope_at_zero()));
    CHECK(b.gamma1 == 0.0);
    CHECK(b.gamma2 == 0.0);
}

TEST_CASE("bounds: domain errors and positivity invariants") {
    const auto q = PhaseResponseFunction::tanh_family(0.4);
    CHECK_THROWS_AS(compute_bounds(q, q, kPi, 10000), std::domain_error);
    CHECK_THROWS_AS(compute_bounds(q, q, 4.0, 10000), std::domain_error);

    // sigma1, sigma2 > 0 below pi/2; sigma4 >= 0 at or above pi/2
    for (double eps_bar : {0.3, 1.0, 1.5}) {
        const auto b = compute_bounds(q, q, eps_bar, 2000);
        CHECK(b.sigma1 > 0.0);
        CHECK(b.sigma2 > 0.0);
    }
    for (double eps_bar : {kPi / 2, 2.0, 3.0}) {
        const auto b = compute_bounds(q, q, eps_bar, 2000);
        CHECK(b.sigma4 >= 0.0);
    }
}

TEST_CASE("bounds: sigma1 shrinks as the interval grows") {
    const auto qg = PhaseResponseFunction::tanh_family(0.8);
    const auto ql = PhaseResponseFunction::sine(1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps_bar : {0.0, 0.2, 0.5, 1.0, 1.4, 2.0, 2.8}) {
        const auto b = compute_bounds(qg, ql, eps_bar, 4000);
        CHECK(b.sigma1 <= prev + 1e-12);
        prev = b.sigma1;
    }
}

TEST_CASE("tanh ratio derivative numerator is negative inside, zero at the rim") {
    CHECK(tanh_ratio_derivative_numerator(kPi / 2, 0.4) < 0.0);
    CHECK(tanh_ratio_derivative_numerator(kPi, 0.4) == doctest::Approx(0.0).scale(1e-9));
    CHECK(tanh_ratio_derivative_numerator(-kPi, 0.4) == doctest::Approx(0.0).scale(1e-9));
}

TEST_CASE("tanh rate monotonicity check on the standard eps grid") {
    const auto rep = verify_tanh_rate_monotonicity({0.05, 0.1, 0.2, 0.4, 0.8, 1.6}, 10000);
    CHECK(rep.passed);
    CHECK(rep.f_violations.empty());
    CHECK(rep.ratio_violations.empty());
}

TEST_CASE("ratio Q(x)/x orders by eps pointwise") {
    const auto qa = PhaseResponseFunction::tanh_family(0.4);
    const auto qb = PhaseResponseFunction::tanh_family(0.8);
    for (int i = 1; i <= 50; ++i) {
        const double x = kPi * i / 51.0;
        CHECK(qa(x) / x > qb(x) / x);
        CHECK(qa(-x) / -x > qb(-x) / -x);
    }
}
