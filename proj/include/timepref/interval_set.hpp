#pragma once

#include <optional>
#include <string>
#include <vector>

namespace timepref {

/// Endpoint gap below which touching intervals are merged.
inline constexpr double kTouchTol = 1e-12;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval open(double a, double b) { return {a, b, false, false}; }
    static Interval closed(double a, double b) { return {a, b, true, true}; }
    static Interval point(double x) { return {x, x, true, true}; }

    bool contains(double x) const;
    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_point() const { return lo == hi; }
    bool operator==(const Interval&) const = default;
};

/// Sorted, disjoint union of intervals. Single points are kept (a tie can be
/// the only way to realize a labeling) but add nothing to the length.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet of(const Interval& iv) { return IntervalSet(std::vector<Interval>{iv}); }

    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }
    double total_length() const;
    bool contains(double x) const;

    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet unite(const IntervalSet& other) const;
    /// Set inclusion, up to the touch tolerance at endpoints.
    bool is_subset_of(const IntervalSet& other) const;

    /// Longest component; a point only when nothing has positive length.
    std::optional<Interval> widest() const;

    /// Bracket notation, e.g. "[0.25, 0.75)" or "{}" when empty.
    std::string to_string() const;

    bool operator==(const IntervalSet&) const = default;

private:
    void normalize();
    std::vector<Interval> parts_;
};

}  // namespace timepref
