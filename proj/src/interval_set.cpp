#include "timepref/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "timepref/format.hpp"

namespace timepref {

bool Interval::contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

void IntervalSet::normalize() {
    std::vector<Interval> keep;
    for (const auto& iv : parts_) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw std::invalid_argument("interval endpoints must be finite");
        if (iv.lo > iv.hi) continue;
        if (iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed)) continue;
        keep.push_back(iv);
    }
    std::sort(keep.begin(), keep.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> out;
    for (const auto& iv : keep) {
        if (!out.empty()) {
            Interval& last = out.back();
            const double gap = iv.lo - last.hi;
            // An exact shared endpoint open on both sides is a genuine hole.
            const bool joins = gap < 0.0 || (gap == 0.0 && (last.hi_closed || iv.lo_closed)) ||
                               (gap > 0.0 && gap <= kTouchTol);
            if (joins) {
                if (iv.hi > last.hi) {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                } else if (iv.hi == last.hi) {
                    last.hi_closed = last.hi_closed || iv.hi_closed;
                }
                continue;
            }
        }
        out.push_back(iv);
    }
    parts_ = std::move(out);
}

double IntervalSet::total_length() const {
    double s = 0.0;
    for (const auto& iv : parts_) s += iv.length();
    return s;
}

bool IntervalSet::contains(double x) const {
    for (const auto& iv : parts_)
        if (iv.contains(x)) return true;
    return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : parts_) {
        for (const auto& b : other.parts_) {
            Interval c;
            if (a.lo > b.lo) {
                c.lo = a.lo;
                c.lo_closed = a.lo_closed;
            } else if (b.lo > a.lo) {
                c.lo = b.lo;
                c.lo_closed = b.lo_closed;
            } else {
                c.lo = a.lo;
                c.lo_closed = a.lo_closed && b.lo_closed;
            }
            if (a.hi < b.hi) {
                c.hi = a.hi;
                c.hi_closed = a.hi_closed;
            } else if (b.hi < a.hi) {
                c.hi = b.hi;
                c.hi_closed = b.hi_closed;
            } else {
                c.hi = a.hi;
                c.hi_closed = a.hi_closed && b.hi_closed;
            }
            out.push_back(c);
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
}

bool IntervalSet::is_subset_of(const IntervalSet& other) const {
    for (const auto& a : parts_) {
        bool inside = false;
        for (const auto& b : other.parts_) {
            const bool lo_ok = a.lo == b.lo ? (b.lo_closed || !a.lo_closed) : a.lo > b.lo - kTouchTol;
            const bool hi_ok = a.hi == b.hi ? (b.hi_closed || !a.hi_closed) : a.hi < b.hi + kTouchTol;
            if (lo_ok && hi_ok) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

std::optional<Interval> IntervalSet::widest() const {
    if (parts_.empty()) return std::nullopt;
    const Interval* best = &parts_.front();
    for (const auto& iv : parts_)
        if (iv.length() > best->length()) best = &iv;
    return *best;
}

std::string IntervalSet::to_string() const {
    if (parts_.empty()) return "{}";
    std::ostringstream s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto& iv = parts_[i];
        if (i) s << " U ";
        if (iv.is_point()) {
            s << "{" << format_real(iv.lo) << "}";
            continue;
        }
        s << (iv.lo_closed ? '[' : '(') << format_real(iv.lo) << ", " << format_real(iv.hi)
          << (iv.hi_closed ? ']' : ')');
    }
    return s.str();
}

}  // namespace timepref
