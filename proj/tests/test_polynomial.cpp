#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "timepref/polynomial.hpp"
#include "timepref/wide.hpp"

using namespace timepref;

namespace {

// Sign changes of p on a uniform grid over (a, b); exact zeros are skipped.
int grid_sign_changes(const Polynomial& p, double a, double b, int points) {
    int changes = 0;
    int last = 0;
    for (int i = 1; i < points; ++i) {
        const double x = a + (b - a) * i / points;
        const double v = p(x);
        if (v == 0.0) continue;
        const int s = v > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

TEST_SUITE("polynomial") {

TEST_CASE("evaluation") {
    CHECK(Polynomial({-0.5, 1})(0.5) == 0.0);
    CHECK(Polynomial()(0.7) == 0.0);
    // (d - 1/4)(d - 3/4) = d^2 - d + 3/16
    CHECK(Polynomial({0.1875, -1, 1})(0.25) == doctest::Approx(0.0));
    CHECK(eval(Polynomial({1, 2, 3}), 2.0) == 17.0);
}

TEST_CASE("from_roots expands products") {
    CHECK(from_roots<double>({0.5}, 1.0).coeffs() == std::vector<double>{-0.5, 1});
    CHECK(from_roots<double>({}, 3.0).coeffs() == std::vector<double>{3});
    const auto p = from_roots<double>({0.25, 0.75}, 1.0);
    CHECK(p.coeffs() == std::vector<double>{0.1875, -1, 1});
    CHECK(p(0.25) == doctest::Approx(0.0));
    CHECK(p(0.75) == doctest::Approx(0.0));
    // Vieta: second coefficient of prod (d - r) is -sum r
    const auto q = from_roots<double>({0.1, 0.2, 0.3}, 2.0);
    CHECK(q.coeff(2) == doctest::Approx(-2 * 0.6));
    CHECK(q.coeff(0) == doctest::Approx(-2 * 0.006));
}

TEST_CASE("trim is relative to the largest coefficient") {
    Polynomial p({1e-20, 1e-20});
    CHECK(p.degree() == 1);
    Polynomial q({1.0, 1e-14});
    CHECK(q.degree() == 0);
}

TEST_CASE("Sturm root counts") {
    CHECK(count_roots_in(Polynomial({-0.5, 1}), 0.0, 1.0) == 1);
    CHECK(count_roots_in(Polynomial({1, 1}), 0.0, 1.0) == 0);
    CHECK(count_roots_in(Polynomial({0.1875, -1, 1}), 0.0, 1.0) == 2);
    // double root counts once
    CHECK(count_roots_in(from_roots<double>({0.5, 0.5}, 1.0), 0.0, 1.0) == 1);
    CHECK_THROWS(count_roots_in(Polynomial(), 0.0, 1.0));
}

TEST_CASE("root isolation") {
    auto r = isolate_roots_in(Polynomial({-0.5, 1}), 0.0, 1.0, 1e-12);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-12));
    r = isolate_roots_in(Polynomial({0.1875, -1, 1}), 0.0, 1.0, 1e-12);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(r[1] == doctest::Approx(0.75).epsilon(1e-11));
    CHECK(isolate_roots_in(Polynomial({1}), 0.0, 1.0, 1e-12).empty());
}

TEST_CASE("sign partition") {
    auto part = sign_partition<double>({Polynomial({-0.5, 1})}, 0.0, 1.0);
    REQUIRE(part.breakpoints.size() == 1);
    CHECK(part.breakpoints[0] == doctest::Approx(0.5));
    CHECK(part.cell_signs == std::vector<std::vector<std::uint8_t>>{{0}, {1}});

    part = sign_partition<double>({Polynomial({-0.5, 1}), Polynomial({0.1875, -1, 1})}, 0.0, 1.0);
    REQUIRE(part.breakpoints.size() == 3);
    CHECK(part.breakpoints[0] == doctest::Approx(0.25));
    CHECK(part.breakpoints[1] == doctest::Approx(0.5));
    CHECK(part.breakpoints[2] == doctest::Approx(0.75));
    CHECK(part.cell_signs == std::vector<std::vector<std::uint8_t>>{{0, 1}, {0, 0}, {1, 0}, {1, 1}});
    // independent check at the cell midpoints
    for (std::size_t i = 0; i < part.cells(); ++i) {
        const double m = part.cell_mid(i);
        CHECK(part.cell_signs[i][0] == (m - 0.5 >= 0));
        CHECK(part.cell_signs[i][1] == ((m - 0.25) * (m - 0.75) >= 0));
    }
}

TEST_CASE("sign partition collisions") {
    const std::vector<Polynomial> polys{Polynomial({-0.5, 1}), Polynomial({-0.5 - 1e-12, 1})};
    CHECK_THROWS_AS(sign_partition(polys, 0.0, 1.0, 1e-9, CollisionPolicy::Throw), BreakpointCollision);
    const auto part = sign_partition(polys, 0.0, 1.0, 1e-9, CollisionPolicy::Merge);
    CHECK(part.breakpoints.size() == 1);
}

TEST_CASE("span solve") {
    const std::vector<Polynomial> mono{Polynomial({1}), Polynomial({0, 1}), Polynomial({0, 0, 1}),
                                       Polynomial({0, 0, 0, 1})};
    const auto f = span_solve(mono, Polynomial({0.1875, -1, 1, 0}));
    CHECK(f == std::vector<double>{0.1875, -1, 1, 0});

    // f1 (1 + 2a) + f2 (1 + a) = a
    const std::vector<Polynomial> hd{Polynomial({1, 2}), Polynomial({1, 1})};
    const auto g = span_solve(hd, Polynomial({0, 1}));
    REQUIRE(g.size() == 2);
    CHECK(g[0] == doctest::Approx(1.0));
    CHECK(g[1] == doctest::Approx(-1.0));

    CHECK_THROWS_AS(span_solve(std::vector<Polynomial>{Polynomial({1, 1}), Polynomial({1, 1})}, Polynomial({0, 1})),
                    SingularBasisError);
}

TEST_CASE("wide precision agrees with double on easy inputs") {
    const auto p = from_roots<WideReal>({WideReal(1) / 4, WideReal(3) / 4}, WideReal(1));
    CHECK(count_roots_in(p, WideReal(0), WideReal(1)) == 2);
    CHECK(to_double(p.coeff(0)) == 0.1875);
}

TEST_CASE("Sturm counts agree with a grid oracle") {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int disagreements = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = 1 + static_cast<int>(gen() % 6);
        std::vector<double> roots;
        while (static_cast<int>(roots.size()) < deg) {
            const double r = -0.5 + 2.0 * u(gen);
            bool ok = std::abs(r) > 0.02 && std::abs(r - 1.0) > 0.02;
            for (double s : roots) ok = ok && std::abs(s - r) > 0.02;
            if (ok) roots.push_back(r);
        }
        const auto p = from_roots(roots, 1.0);
        disagreements += count_roots_in(p, 0.0, 1.0) != grid_sign_changes(p, 0.0, 1.0, 20000);
    }
    CHECK(disagreements == 0);
}

}
