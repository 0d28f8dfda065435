#include <doctest.h>

#include <cmath>
#include <sstream>

#include "timepref/datagen.hpp"
#include "timepref/rng.hpp"

using namespace timepref;

TEST_SUITE("datagen") {

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(7, 0), b(7, 0), c(7, 1);
    for (int i = 0; i < 5; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    Rng d(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.uniform01();
        CHECK((u > 0.0 && u < 1.0));
    }
    CHECK(Rng(5).substream(2)() == Rng(5).substream(2)());
}

TEST_CASE("mu pair from fixed draws") {
    const auto p = mu_pair_from(MuSample{{0.5}, 1});
    CHECK(p.x == std::vector<double>{-0.5, 1});
    CHECK(p.y == std::vector<double>{0, 0});
    const auto q = mu_pair_from(MuSample{{0.25, 0.75}, -1});
    CHECK(q.x == std::vector<double>{-0.1875, 1, -1});
}

TEST_CASE("mu samples put T-1 roots in (0, 1)") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto p = sample_mu_pair(5, rng);
        CHECK(count_roots_in(Polynomial(p.x), 0.0, 1.0) == 4);
    }
}

TEST_CASE("labeling") {
    const ChoicePair p{{-0.5, 1}, {0, 0}};
    CHECK(label_dataset(Exponential{0.6}, {p}).labels == std::vector<int>{1});
    CHECK(label_dataset(Exponential{0.4}, {p}).labels == std::vector<int>{0});
    const auto empty = label_dataset(Exponential{0.4}, {});
    CHECK(empty.empty());
}

TEST_CASE("same seed gives identical data") {
    Rng a(42), b(42);
    const auto x = sample_pairs(GaussianPairs{4, 2.0}, 50, a);
    const auto y = sample_pairs(GaussianPairs{4, 2.0}, 50, b);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i].x == y[i].x);
        CHECK(x[i].y == y[i].y);
    }
}

TEST_CASE("dataset round trip is byte identical") {
    Rng rng(3);
    const auto ds = label_dataset(Hyperbolic{0.7}, sample_pairs(MuRootUniform{4}, 100, rng));
    std::ostringstream first;
    write_dataset(first, DatasetHeader{4, 3, "mu"}, ds);
    std::istringstream in(first.str());
    const auto back = read_dataset(in);
    CHECK(back.header.T == 4);
    CHECK(back.header.seed == 3);
    CHECK(back.data.labels == ds.labels);
    std::ostringstream second;
    write_dataset(second, back.header, back.data);
    CHECK(first.str() == second.str());
}

TEST_CASE("dataset errors carry line numbers") {
    std::istringstream bad_label("{\"T\":2,\"seed\":0,\"dist\":\"mu\"}\n{\"x\":[1,0],\"y\":[0,0],\"label\":2}\n");
    try {
        read_dataset(bad_label);
        FAIL("expected a parse error");
    } catch (const DatasetParseError& e) {
        CHECK(e.line == 2);
    }
    std::istringstream bad_len("# comment\n{\"T\":2,\"seed\":0,\"dist\":\"mu\"}\n\n{\"x\":[1,0,3],\"y\":[0,0,0],\"label\":1}\n");
    try {
        read_dataset(bad_len);
        FAIL("expected a schema error");
    } catch (const DatasetSchemaError& e) {
        CHECK(e.line == 4);
    }
    std::istringstream junk("{\"T\":2,\"seed\":0,\"dist\":\"mu\"}\nnot json\n");
    CHECK_THROWS_AS(read_dataset(junk), DatasetParseError);
}

}
