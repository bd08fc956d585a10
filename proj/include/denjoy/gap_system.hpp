#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/interval_set.hpp"
#include "denjoy/mobius.hpp"

namespace denjoy {

// Complement description of a Denjoy set E = R \ (union of open gaps).
// Gaps are strictly ordered and disjoint; the outermost gaps may be
// unbounded (c = -inf or d = +inf). The origin always belongs to E with
// a positive margin. `truncation` records the radius beyond which the
// gap list is not meaningful; per-R results are reported against it.
class GapSystem {
public:
    GapSystem(std::vector<Interval> gaps, double truncation,
              std::optional<double> origin_margin = std::nullopt)
        : gaps_(std::move(gaps)), truncation_(truncation) {
        if (!(truncation_ > 0)) throw domain_error("GapSystem: truncation must be positive");
        std::sort(gaps_.begin(), gaps_.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < gaps_.size(); ++i) {
            const auto& g = gaps_[i];
            if (std::isnan(g.lo) || std::isnan(g.hi) || !(g.lo < g.hi))
                throw domain_error("GapSystem: gap endpoints must satisfy c < d");
            if (std::isinf(g.lo) && i != 0)
                throw domain_error("GapSystem: only the first gap may extend to -inf");
            if (std::isinf(g.hi) && i + 1 != gaps_.size())
                throw domain_error("GapSystem: only the last gap may extend to +inf");
            if (g.lo <= 0 && 0 <= g.hi)
                throw domain_error("GapSystem: no gap may contain or touch the origin");
            if (i > 0 && !(gaps_[i - 1].hi < g.lo))
                throw domain_error("GapSystem: gaps must be strictly ordered and disjoint");
            margin = std::min(margin, g.lo > 0 ? g.lo : -g.hi);
        }
        origin_margin_ = origin_margin.value_or(std::isinf(margin) ? truncation_ : margin);
        if (!(origin_margin_ > 0)) throw domain_error("GapSystem: origin margin must be positive");
    }

    static GapSystem whole_line(double truncation) { return GapSystem({}, truncation); }

    const std::vector<Interval>& gaps() const { return gaps_; }
    double truncation() const { return truncation_; }
    double origin_margin() const { return origin_margin_; }

    bool has_unbounded_gap() const {
        return !gaps_.empty() && (std::isinf(gaps_.front().lo) || std::isinf(gaps_.back().hi));
    }

    bool in_set(double x) const {
        for (const auto& g : gaps_)
            if (g.lo < x && x < g.hi) return false;
        return true;
    }

    // Gaps clipped to (-R, R); empty clips dropped.
    std::vector<Interval> gaps_within(double R) const {
        std::vector<Interval> out;
        for (const auto& g : gaps_) {
            double lo = std::max(g.lo, -R), hi = std::min(g.hi, R);
            if (lo < hi) out.push_back({lo, hi});
        }
        return out;
    }

    // theta_E(t) = |E* cap [-t,t]|
    double theta(double t) const {
        if (!(t > 0)) throw domain_error("theta_E: t must be positive");
        double s = 0;
        for (const auto& g : gaps_) {
            double lo = std::max(g.lo, -t), hi = std::min(g.hi, t);
            if (hi > lo) s += hi - lo;
        }
        return s;
    }

    // |E cap [a,b]| exactly.
    double measure_in(double a, double b) const {
        double s = b - a;
        for (const auto& g : gaps_) {
            double lo = std::max(g.lo, a), hi = std::min(g.hi, b);
            if (hi > lo) s -= hi - lo;
        }
        return s;
    }

    // E cap [a,b] as a list of closed intervals (may be empty or contain
    // degenerate points, which are dropped).
    std::vector<Interval> intersect_interval(double a, double b) const {
        std::vector<Interval> out;
        double cur = a;
        for (const auto& g : gaps_) {
            if (g.hi <= a || g.lo >= b) continue;
            double lo = std::max(g.lo, a), hi = std::min(g.hi, b);
            if (lo > cur) out.push_back({cur, lo});
            cur = std::max(cur, hi);
        }
        if (cur < b) out.push_back({cur, b});
        return out;
    }

    // Components of E on the extended line, each [lo,hi] with possibly
    // infinite endpoints. The component through infinity is reported as
    // two half-rays; a Moebius image with pole in a gap rejoins them.
    std::vector<Interval> components() const {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<Interval> comp;
        double cur = -inf;
        for (const auto& g : gaps_) {
            if (g.lo > cur) comp.push_back({cur, g.lo});
            cur = g.hi;
        }
        if (cur < inf) comp.push_back({cur, inf});
        return comp;
    }

private:
    std::vector<Interval> gaps_;
    double truncation_;
    double origin_margin_;
};

inline double lebesgue_density(const GapSystem& E, double a, double b) {
    if (!(a < b)) throw domain_error("lebesgue_density: need a < b");
    return E.measure_in(a, b) / (b - a);
}

// Image of E under a Moebius map whose pole lies inside a gap of E, as a
// compact interval union. The map must be decreasing on each side of its
// pole or increasing; either way each component maps to an interval.
inline IntervalSet mobius_image(const GapSystem& E, const MobiusMap& M) {
    std::vector<std::pair<double, double>> raw;
    for (const auto& comp : E.components()) {
        double a = M(comp.lo), b = M(comp.hi);
        if (std::isinf(a) || std::isinf(b))
            throw domain_error("mobius_image: pole of the map lies in E");
        raw.emplace_back(std::min(a, b), std::max(a, b));
    }
    return IntervalSet::normalize(std::move(raw));
}

// Remark-5 reduction: w = (d0-c0)/(2z - c0 - d0) for the pivot gap
// (c0,d0). Maps E onto a compact F inside [-1,1] with -1,1 in F and the
// point at infinity onto 0. Returns F and the map.
inline std::pair<IntervalSet, MobiusMap> gaps_to_compact(const GapSystem& E,
                                                         std::size_t pivot) {
    if (pivot >= E.gaps().size())
        throw domain_error("gaps_to_compact: pivot index out of range");
    const Interval g = E.gaps()[pivot];
    if (std::isinf(g.lo) || std::isinf(g.hi))
        throw domain_error("gaps_to_compact: pivot gap must be bounded");
    if (!(g.hi > g.lo))
        throw domain_error("gaps_to_compact: degenerate pivot gap");
    MobiusMap w(0.0, g.hi - g.lo, 2.0, -(g.lo + g.hi));
    return {mobius_image(E, w), w};
}

// Default pivot: the gap nearest the origin (smallest distance from 0 to
// the gap closure); ties break to the lower index.
inline std::size_t default_pivot(const GapSystem& E) {
    if (E.gaps().empty()) throw domain_error("default_pivot: E has no gaps");
    std::size_t best = E.gaps().size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < E.gaps().size(); ++j) {
        const auto& g = E.gaps()[j];
        if (std::isinf(g.lo) || std::isinf(g.hi)) continue;
        double d = g.lo > 0 ? g.lo : -g.hi;
        if (d < best_d) { best_d = d; best = j; }
    }
    if (best == E.gaps().size())
        throw domain_error("default_pivot: no bounded gap available");
    return best;
}

} // namespace denjoy
