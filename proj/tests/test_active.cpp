#include <doctest.h>

#include <cmath>

#include "timepref/active.hpp"
#include "timepref/datagen.hpp"

using namespace timepref;

namespace {

double binom(int n, int k) {
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// P(Bin(n, d) odd) by direct summation
double odd_binomial(double d, int n) {
    double s = 0;
    for (int k = 1; k <= n; k += 2) s += binom(n, k) * std::pow(d, k) * std::pow(1 - d, n - k);
    return s;
}

// Brute force over a gamma grid: the ball holds the gamma whose disagreement
// with delta, (1 - (1 - 2|gamma - delta|)^(T-1)) / 2, is at most R.
bool disagrees_on_grid(const Polynomial& p, double delta, double R, int T) {
    const int ref = label_sign(p(delta));
    for (int i = 1; i < 4000; ++i) {
        const double g = i / 4000.0;
        if (0.5 * (1 - std::pow(1 - 2 * std::abs(g - delta), T - 1)) > R) continue;
        if (label_sign(p(g)) != ref) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("active") {

TEST_CASE("parity probability") {
    CHECK(parity_prob(0.0, 4) == 0.0);
    CHECK(parity_prob(0.5, 2) == doctest::Approx(0.5));
    CHECK(parity_prob(0.25, 3) == doctest::Approx(0.375));
    for (int T = 2; T <= 9; ++T)
        for (double d : {0.05, 0.3, 0.62, 0.99}) CHECK(parity_prob(d, T) == doctest::Approx(odd_binomial(d, T - 1)));
}

TEST_CASE("ball radii") {
    auto b = ball_radius_bounds(0.5, 3);
    CHECK(b.R1 == doctest::Approx(0.5));
    CHECK(b.R2 == doctest::Approx(0.5));
    b = ball_radius_bounds(0.375, 3);
    CHECK(b.R1 == doctest::Approx(0.25));
    b = ball_radius_bounds(1e-9, 3);
    CHECK(b.R1 < 1e-6);
    CHECK(b.R2 > 1 - 1e-6);
}

TEST_CASE("closed-form masses") {
    CHECK(disagreement_mass_analytic(0.2, 4) == doctest::Approx(0.4));
    CHECK(disagreement_mass_analytic(0.4, 3) == doctest::Approx(0.2));
    CHECK(disagreement_mass_analytic(0.5, 3) == doctest::Approx(1.0));
    // at delta = 1/2 the window mass is 2R for every T (all roots lie in (0, 1))
    for (int T = 2; T <= 6; ++T)
        for (double R : {0.1, 0.25, 0.4, 0.5}) CHECK(disagreement_mass_windows(0.5, R, T) == doctest::Approx(2 * R));
}

TEST_CASE("window mass agrees with a brute-force grid oracle") {
    Rng rng(17);
    for (auto [delta, R, T] : {std::tuple{0.5, 0.25, 3}, std::tuple{0.2, 0.3, 4}, std::tuple{0.8, 0.1, 5}}) {
        const int N = 4000;
        int hits = 0;
        for (int i = 0; i < N; ++i) hits += disagrees_on_grid(Polynomial(sample_mu_pair(T, rng).x), delta, R, T);
        const double p = disagreement_mass_windows(delta, R, T);
        const double se = std::sqrt(p * (1 - p) / N);
        CHECK(std::abs(hits / double(N) - p) <= 4 * se + 1e-3);
        const auto mc = estimate_disagreement_mass_mc(delta, R, T, 50000, 3);
        CHECK(std::abs(mc.estimate - p) <= 4 * std::sqrt(p * (1 - p) / 50000) + 1e-9);
    }
}

TEST_CASE("Monte Carlo at R = 1/2 is exactly one") {
    CHECK(estimate_disagreement_mass_mc(0.5, 0.5, 4, 10000, 1).estimate == 1.0);
}

TEST_CASE("estimates do not depend on the job count") {
    const auto a = estimate_parity_mc(0.2, 0.7, 5, 200000, 9, 1);
    const auto b = estimate_parity_mc(0.2, 0.7, 5, 200000, 9, 4);
    CHECK(a.hits == b.hits);
}

TEST_CASE("theta at T = 3 peaks at R = 1/2") {
    const auto rep = estimate_theta(0.5, 3, default_R_grid(), 200000, 1);
    CHECK(rep.ratio_sup >= 1.9);
    CHECK(rep.ratio_sup <= 2.1);
}

TEST_CASE("cal bound arithmetic") {
    const double expect = 2 * std::log2(100.0) * (3 * 1 + std::log2(std::log2(100.0) / 0.1));
    CHECK(cal_bound(0.01, 0.1, 3, 2) == doctest::Approx(expect));
    CHECK(cal_bound(0.01, 0.1, 3, 2) == doctest::Approx(120.3).epsilon(1e-3));
    CHECK(cal_bound(0.001, 0.1, 3, 2) > cal_bound(0.01, 0.1, 3, 2));
    CHECK(cal_bound(0.01, 0.1, 3, 1) == doctest::Approx(1 * std::log2(100.0) * (3 + std::log2(std::log2(100.0) / 0.1))));
}

TEST_CASE("CAL skips points without disagreement") {
    CalLearner L(3);
    int asked = 0;
    CHECK_FALSE(L.observe(Polynomial({1, 0, 1}), [&] { ++asked; return 1; }));
    CHECK(asked == 0);
    CHECK(L.state().points_seen == 1);
    CHECK(L.state().labels_used == 0);
    CHECK(L.observe(Polynomial({-0.5, 1}), [&] { ++asked; return 1; }));
    CHECK(L.hull_length() == doctest::Approx(0.5));
    // d - 1/4 is positive on [1/2, 1): no query
    CHECK_FALSE(L.observe(Polynomial({-0.25, 1}), [&] { ++asked; return 0; }));
    CHECK(asked == 1);
}

TEST_CASE("CAL keeps the truth and shrinks monotonically") {
    for (std::uint64_t run = 0; run < 100; ++run) {
        Rng rng(run, 5);
        const double delta = rng.uniform01();
        IntervalSet prev = IntervalSet::of(Interval::open(0, 1));
        bool ok = true;
        CalOptions opt;
        opt.eps = 1e-3;
        opt.on_query = [&](const CalState& s) {
            ok = ok && s.version_space.contains(delta) && s.version_space.is_subset_of(prev);
            prev = s.version_space;
        };
        Rng stream = rng.substream(1);
        const auto res = cal_run(delta, 4, opt, stream);
        CHECK(ok);
        CHECK(res.converged);
    }
}

TEST_CASE("the first root-uniform point is always queried") {
    Rng rng(2);
    CalLearner L(5);
    CHECK(L.observe(Polynomial(sample_mu_pair(5, rng).x), [] { return 1; }));
}

TEST_CASE("CAL hypothesis error") {
    int good = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        Rng rng(t, 77);
        CalOptions opt;
        opt.eps = 0.01;
        const auto res = cal_run(0.3, 5, opt, rng);
        const auto test = sample_pairs(MuRootUniform{5}, 1000, rng);
        int wrong = 0;
        for (const auto& p : test) wrong += prefers(Exponential{res.hypothesis}, p) != prefers(Exponential{0.3}, p);
        good += wrong <= 10;
    }
    CHECK(good >= 48);
}

}
