#include <doctest.h>

#include <cmath>

#include "timepref/mq.hpp"
#include "timepref/rng.hpp"

using namespace timepref;

TEST_SUITE("mq") {

TEST_CASE("oracle counts queries") {
    Oracle o(Exponential{0.5});
    CHECK(o.query(ChoicePair{{1, 0}, {0, 1.9}}) == 1);
    CHECK(o.query(ChoicePair{{0, 1.9}, {1, 0}}) == 0);
    CHECK(o.query_count() == 2);
}

TEST_CASE("indifference search brackets b_rho") {
    Oracle o(Exponential{0.64});
    const double eta = std::ldexp(1.0, -10);
    const double b = indifference_search(o, ed_adapter(), 1.0, eta);
    CHECK(std::abs(b - 0.64) <= eta);
    CHECK(o.query_count() <= 11);
}

TEST_CASE("coarse eta takes one step") {
    Oracle o(Exponential{0.3});
    const double b = indifference_search(o, ed_adapter(), 1.0, 1.0);
    CHECK(b == doctest::Approx(0.5));
}

TEST_CASE("learning the exponential parameter") {
    Oracle o(Exponential{0.37});
    const auto r = mq_learn(o, ed_adapter(), 1e-3);
    CHECK(std::abs(r.param - 0.37) <= 1e-3);
    CHECK(r.queries <= 11);
    CHECK(mq_query_budget(ed_adapter(), 1e-3) == 11);
}

TEST_CASE("learning the hyperbolic parameter") {
    const auto a = hd_adapter(4.0);
    CHECK(a.M == doctest::Approx(9.0 / 5));
    CHECK(a.C == doctest::Approx(25.0));
    Oracle o(Hyperbolic{1.5});
    const auto r = mq_learn(o, a, 1e-3);
    CHECK(std::abs(r.param - 1.5) <= 1e-3);
    CHECK(r.queries <= mq_query_budget(a, 1e-3));
}

TEST_CASE("vacuous precision stays in the domain") {
    Oracle o(Exponential{0.9});
    const auto r = mq_learn(o, ed_adapter(), 2.0);
    CHECK(ed_adapter().param_domain.contains(r.param));
}

TEST_CASE("doubling rho changes nothing") {
    for (double truth : {0.11, 0.5, 0.93}) {
        Oracle a(Exponential{truth}), b(Exponential{truth});
        const auto r1 = mq_learn(a, ed_adapter(), 1e-4, 1.0);
        const auto r2 = mq_learn(b, ed_adapter(), 1e-4, 2.0);
        CHECK(r1.param == r2.param);
        CHECK(r1.queries == r2.queries);
    }
}

TEST_CASE("hyperbolic inverse-Lipschitz constant holds numerically") {
    const auto a = hd_adapter(4.0);
    Rng rng(8);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x = 4 * rng.uniform01(), y = 4 * rng.uniform01();
        bad += std::abs(x - y) > a.C * std::abs(a.ratio(x) - a.ratio(y)) * (1 + 1e-12);
    }
    CHECK(bad == 0);
    for (double x : {0.2, 1.0, 3.9}) CHECK(a.ratio_inverse(a.ratio(x)) == doctest::Approx(x));
}

}
