#include <doctest.h>

#include "timepref/interval_set.hpp"

using namespace timepref;

TEST_SUITE("interval_set") {

TEST_CASE("normalization merges overlaps and touching ends") {
    IntervalSet s({Interval::closed(0.5, 0.75), Interval{0.25, 0.5, true, false}, Interval::open(0.9, 1.0)});
    REQUIRE(s.size() == 2);
    CHECK(s.intervals()[0] == Interval::closed(0.25, 0.75));
    CHECK(s.total_length() == doctest::Approx(0.6));
}

TEST_CASE("a shared endpoint open on both sides stays a gap") {
    IntervalSet s({Interval::open(0.0, 0.5), Interval::open(0.5, 1.0)});
    CHECK(s.size() == 2);
    CHECK_FALSE(s.contains(0.5));
}

TEST_CASE("points survive and add no length") {
    IntervalSet s({Interval::point(0.3), Interval::open(0.5, 0.6)});
    CHECK(s.contains(0.3));
    CHECK(s.total_length() == doctest::Approx(0.1));
    CHECK(s.widest()->lo == doctest::Approx(0.5));
    CHECK(IntervalSet::of(Interval::point(0.2)).widest()->is_point());
}

TEST_CASE("intersect and unite") {
    const auto a = IntervalSet::of(Interval{0.25, 1.0, true, false});
    const auto b = IntervalSet::of(Interval{0.0, 0.75, false, false});
    const auto c = a.intersect(b);
    REQUIRE(c.size() == 1);
    CHECK(c.intervals()[0] == Interval{0.25, 0.75, true, false});
    CHECK(c.is_subset_of(a));
    CHECK(c.is_subset_of(b));
    CHECK(a.unite(b) == IntervalSet::of(Interval::open(0.0, 1.0)));
    CHECK(IntervalSet().to_string() == "{}");
    CHECK(c.to_string() == "[0.25, 0.75)");
}

}
