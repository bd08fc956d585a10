#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "denjoy/common.hpp"

namespace denjoy {

struct Interval {
    double lo = 0;
    double hi = 0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

// How normalize() treats intervals that share an endpoint.
enum class TouchPolicy { Merge, Reject };

// A compact subset of the real line: finitely many disjoint closed
// intervals, sorted increasing. Immutable after construction.
class IntervalSet {
public:
    IntervalSet() = default;

    static IntervalSet normalize(std::vector<std::pair<double, double>> raw,
                                 TouchPolicy touch = TouchPolicy::Merge,
                                 bool allow_points = false) {
        if (raw.empty())
            throw domain_error("IntervalSet: empty input");
        for (auto& [lo, hi] : raw) {
            if (!(std::isfinite(lo) && std::isfinite(hi)))
                throw domain_error("IntervalSet: non-finite endpoint");
            if (lo > hi)
                throw domain_error("IntervalSet: lo > hi");
        }
        std::sort(raw.begin(), raw.end());
        std::vector<Interval> merged;
        for (auto& [lo, hi] : raw) {
            if (!merged.empty() && lo <= merged.back().hi) {
                if (lo == merged.back().hi && touch == TouchPolicy::Reject)
                    throw domain_error("IntervalSet: touching intervals rejected");
                merged.back().hi = std::max(merged.back().hi, hi);
            } else {
                merged.push_back({lo, hi});
            }
        }
        if (!allow_points)
            for (const auto& iv : merged)
                if (iv.lo == iv.hi)
                    throw domain_error("IntervalSet: degenerate (point) component");
        IntervalSet s;
        s.intervals_ = std::move(merged);
        return s;
    }

    static IntervalSet single(double lo, double hi) { return normalize({{lo, hi}}); }

    const std::vector<Interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    double inf() const { return intervals_.front().lo; }
    double sup() const { return intervals_.back().hi; }
    Interval hull() const { return {inf(), sup()}; }
    double diameter() const { return sup() - inf(); }

    double measure() const {
        double s = 0;
        for (const auto& iv : intervals_) s += iv.length();
        return s;
    }

    bool contains(double x) const {
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                                   [](double v, const Interval& iv) { return v < iv.lo; });
        if (it == intervals_.begin()) return false;
        --it;
        return x <= it->hi;
    }

    // |S cap [a,b]| by exact interval arithmetic.
    double measure_in(double a, double b) const {
        double s = 0;
        for (const auto& iv : intervals_) {
            double lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
            if (hi > lo) s += hi - lo;
        }
        return s;
    }

    // S cap [a,b]; empty result allowed (degenerate components dropped).
    std::vector<Interval> clip(double a, double b) const {
        std::vector<Interval> out;
        for (const auto& iv : intervals_) {
            double lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
            if (hi > lo) out.push_back({lo, hi});
        }
        return out;
    }

    IntervalSet translated_scaled(double s, double t) const {
        // image under x -> s*x + t
        std::vector<std::pair<double, double>> raw;
        for (const auto& iv : intervals_) {
            double a = s * iv.lo + t, b = s * iv.hi + t;
            raw.emplace_back(std::min(a, b), std::max(a, b));
        }
        return normalize(std::move(raw));
    }

    // Interior gaps (open intervals between consecutive components).
    std::vector<Interval> interior_gaps() const {
        std::vector<Interval> g;
        for (std::size_t i = 0; i + 1 < intervals_.size(); ++i)
            g.push_back({intervals_[i].hi, intervals_[i + 1].lo});
        return g;
    }

private:
    std::vector<Interval> intervals_;
};

// |F cap [a,b]| / (b-a) for a compact interval union.
inline double lebesgue_density(const IntervalSet& set, double a, double b) {
    if (!(a < b)) throw domain_error("lebesgue_density: need a < b");
    return set.measure_in(a, b) / (b - a);
}

} // namespace denjoy
