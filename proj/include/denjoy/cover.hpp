#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "denjoy/comb.hpp"
#include "denjoy/common.hpp"
#include "denjoy/gap_system.hpp"
#include "denjoy/interval_set.hpp"
#include "denjoy/mobius.hpp"

namespace denjoy {

enum class BlockTag { Plain, Dense, Comb };

inline const char* to_string(BlockTag t) {
    switch (t) {
        case BlockTag::Plain: return "plain";
        case BlockTag::Dense: return "dense";
        case BlockTag::Comb: return "comb";
    }
    return "?";
}

struct CoverBlock {
    double a = 0, b = 0;
    BlockTag tag = BlockTag::Plain;
};

// Record of one greedy merge decision in the comb-coordinate builder.
struct GreedyStep {
    double lo = 0, hi = 0;   // emitted block in comb coordinates
    double max_height = 0;   // tallest slit inside
    int cells = 0;           // grid cells merged
    bool sandwich = false;   // 1/6 <= height/span <= 1/2 held
};

struct CoverSystem {
    std::vector<CoverBlock> blocks;    // ordered, b_{j-1} <= a_j < b_j
    std::vector<Interval> exempt;      // regions whose gaps the cover does not claim
    std::vector<GreedyStep> trace;     // comb greedy decisions
    std::vector<std::string> log;

    void check_ordering() const {
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            if (!(blocks[j].a < blocks[j].b))
                throw domain_error("CoverSystem: degenerate block");
            if (j > 0 && !(blocks[j - 1].b <= blocks[j].a + 1e-12 * std::abs(blocks[j].a)))
                throw domain_error("CoverSystem: blocks out of order");
        }
    }

    bool covers(const Interval& gap) const {
        for (const auto& blk : blocks)
            if (blk.a <= gap.lo && gap.hi <= blk.b) return true;
        return false;
    }
};

// Remark-2 cover: one block per bounded gap, endpoints the gap's own.
inline CoverSystem cover_from_gaps(const GapSystem& E) {
    CoverSystem cs;
    for (const auto& g : E.gaps()) {
        if (std::isinf(g.lo) || std::isinf(g.hi))
            throw domain_error("cover_from_gaps: unbounded gap (half-line case)");
        cs.blocks.push_back({g.lo, g.hi, BlockTag::Plain});
    }
    cs.check_ordering();
    return cs;
}

namespace detail {

inline double gap_mass(const GapSystem& E, double a, double b) {
    return (b - a) - E.measure_in(a, b);
}

// Slide an endpoint out of any gap it landed in: left endpoints move
// down to the gap's lo, right endpoints up to the gap's hi.
inline double slide_to_E(const GapSystem& E, double x, bool leftward) {
    for (const auto& g : E.gaps())
        if (g.lo < x && x < g.hi) return leftward ? g.lo : g.hi;
    return x;
}

} // namespace detail

// Dyadic density cover: dyadic blocks with gap mass >= half their length
// are excluded (finitely many, reported); within the rest, consecutive
// gaps merge greedily into cover intervals with endpoints in E whose
// gap density lies in [1/4, 3/4].
inline CoverSystem cover_dyadic_density(const GapSystem& E, double R) {
    if (E.has_unbounded_gap())
        throw domain_error("cover_dyadic_density: unbounded gap (half-line case)");
    CoverSystem cs;

    std::vector<Interval> dyadic{{-1, 1}};
    for (double lo = 1; lo < R; lo *= 2) {
        dyadic.push_back({lo, std::min(2 * lo, R)});
        dyadic.push_back({-std::min(2 * lo, R), -lo});
    }
    std::vector<Interval> kept;
    for (const auto& blk : dyadic) {
        double mass = detail::gap_mass(E, blk.lo, blk.hi);
        if (mass >= 0.5 * blk.length()) {
            cs.exempt.push_back(blk);
            std::ostringstream os;
            os << "dyadic block [" << blk.lo << "," << blk.hi
               << "] excluded: gap mass " << mass << " >= half length";
            cs.log.push_back(os.str());
        } else {
            kept.push_back(blk);
        }
    }
    std::sort(kept.begin(), kept.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });

    // must-cover gap pieces: gaps clipped to kept blocks
    std::vector<Interval> pieces;
    for (const auto& g : E.gaps_within(R))
        for (const auto& blk : kept) {
            double lo = std::max(g.lo, blk.lo), hi = std::min(g.hi, blk.hi);
            if (hi > lo) pieces.push_back({lo, hi});
        }
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });

    double prev_b = -std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    while (k < pieces.size()) {
        std::size_t last = k;
        double span_lo = pieces[k].lo, span_hi = pieces[k].hi;
        double c = span_lo, d = span_hi;
        for (int round = 0; round < 200; ++round) {
            double mass = detail::gap_mass(E, c, d);
            double want = 4 * mass; // target gap density 1/4
            double need = want - (d - c);
            if (need > 0) {
                double pad_l = std::min(need / 2, std::max(0.0, c - prev_b));
                c -= pad_l;
                d += need - pad_l;
            }
            double c2 = std::max(detail::slide_to_E(E, c, true), prev_b);
            double d2 = detail::slide_to_E(E, d, false);
            // swallow following pieces overtaken by the right end
            bool merged = false;
            while (last + 1 < pieces.size() && pieces[last + 1].lo < d2) {
                ++last;
                span_hi = pieces[last].hi;
                d2 = std::max(d2, span_hi);
                merged = true;
            }
            bool moved = (c2 != c) || (d2 != d);
            c = std::min(c2, span_lo);
            d = std::max(d2, span_hi);
            if (!moved && !merged) break;
        }
        double dens = detail::gap_mass(E, c, d) / (d - c);
        if (dens < 0.25 - 1e-9 || dens > 0.75 + 1e-9) {
            std::ostringstream os;
            os << "density target unachievable on [" << c << "," << d
               << "]: gap density " << dens;
            throw domain_error("cover_dyadic_density: " + os.str());
        }
        cs.blocks.push_back({c, d, BlockTag::Dense});
        prev_b = d;
        k = last + 1;
    }
    cs.check_ordering();
    return cs;
}

// Comb-coordinate greedy cover (compact analog of the grid-and-merge
// construction): geometric grid points around u0 with spacing
// proportional to the distance from u0, merged until the tallest slit in
// the span is at most half the span. Single-cell stops are dense; merged
// stops satisfy the 1/6..1/2 sandwich.
inline CoverSystem cover_comb_greedy(const CombData& cd, double base_spacing,
                                     double upper = 0.5, double lower = 1.0 / 6.0) {
    if (!(base_spacing > 0 && base_spacing < 1))
        throw domain_error("cover_comb_greedy: need 0 < base_spacing < 1");
    if (!cd.u0)
        throw domain_error("cover_comb_greedy: CombData lacks u0 (0 not marked in F)");
    double u0 = *cd.u0;
    CoverSystem cs;

    auto run_side = [&](bool right) {
        // distances of slit feet from u0 on this side
        std::vector<std::pair<double, double>> feet; // (distance, height)
        for (const auto& s : cd.slits) {
            double d = right ? s.u - u0 : u0 - s.u;
            if (d > 0) feet.emplace_back(d, s.v);
        }
        std::sort(feet.begin(), feet.end());
        double wall = right ? pi - u0 : u0;
        double d_min = feet.empty() ? base_spacing
                                    : std::min(base_spacing, 0.5 * feet.front().first);

        std::vector<double> grid;
        for (double d = d_min; d < wall; d *= 1 + base_spacing) grid.push_back(d);
        grid.push_back(wall);
        // nudge grid points off slit feet
        for (auto& d : grid) {
            for (int tries = 0; tries < 8; ++tries) {
                bool hit = false;
                for (auto& [fd, fv] : feet)
                    if (std::abs(fd - d) < 1e-9 * std::max(1.0, fd)) hit = true;
                if (!hit) break;
                if (tries == 7)
                    throw domain_error("cover_comb_greedy: grid point collides with a slit foot");
                d *= 1 + 0.1 * base_spacing;
            }
        }

        auto tallest = [&](double lo, double hi) {
            double v = 0;
            for (auto& [fd, fv] : feet)
                if (lo < fd && fd < hi) v = std::max(v, fv);
            return v;
        };

        double gs = grid.front();
        std::size_t m = 1;
        while (m < grid.size()) {
            std::size_t mm = m;
            int cells = 1;
            while (tallest(gs, grid[mm]) > upper * (grid[mm] - gs) && mm + 1 < grid.size()) {
                ++mm;
                ++cells;
            }
            double span = grid[mm] - gs;
            double h = tallest(gs, grid[mm]);
            GreedyStep step;
            step.lo = right ? u0 + gs : u0 - grid[mm];
            step.hi = right ? u0 + grid[mm] : u0 - gs;
            step.max_height = h;
            step.cells = cells;
            step.sandwich = cells > 1 && h >= lower * span - 1e-12 && h <= upper * span + 1e-12;
            if (h > upper * span) {
                std::ostringstream os;
                os << "block clipped at the wall with height " << h << " > " << upper
                   << " * span " << span;
                cs.log.push_back(os.str());
            }
            cs.trace.push_back(step);
            cs.blocks.push_back({step.lo, step.hi,
                                 cells == 1 ? BlockTag::Dense
                                            : (step.sandwich ? BlockTag::Comb
                                                             : BlockTag::Dense)});
            gs = grid[mm];
            m = mm + 1;
        }
    };

    run_side(false);
    run_side(true);
    std::sort(cs.blocks.begin(), cs.blocks.end(),
              [](const CoverBlock& x, const CoverBlock& y) { return x.a < y.a; });
    std::sort(cs.trace.begin(), cs.trace.end(),
              [](const GreedyStep& x, const GreedyStep& y) { return x.lo < y.lo; });
    cs.check_ordering();
    return cs;
}

// Pull a comb-coordinate cover back through psi (and optionally through
// the Moebius reduction) to real-line blocks. Block edges avoid slit
// feet, so Re psi(x) = alpha has a unique solution in F.
inline CoverSystem cover_pullback(const CombMap& comb, const CoverSystem& comb_cover,
                                  const std::optional<MobiusMap>& back = std::nullopt) {
    const auto hull = comb.domain().hull();
    auto invert_base = [&](double alpha) {
        auto f = [&](double x) { return comb.psi(Complex(x, 0)).real() - alpha; };
        double lo = hull.lo, hi = hull.hi;
        double flo = f(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-14 * comb.domain().diameter(); ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = f(mid);
            if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    CoverSystem out;
    out.trace = comb_cover.trace;
    out.log = comb_cover.log;
    for (const auto& blk : comb_cover.blocks) {
        double xa = invert_base(blk.a), xb = invert_base(blk.b);
        if (back) {
            MobiusMap inv = back->inverse();
            double ea = inv(xa), eb = inv(xb);
            out.blocks.push_back({std::min(ea, eb), std::max(ea, eb), blk.tag});
        } else {
            out.blocks.push_back({std::min(xa, xb), std::max(xa, xb), blk.tag});
        }
    }
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const CoverBlock& x, const CoverBlock& y) { return x.a < y.a; });
    out.check_ordering();
    return out;
}

} // namespace denjoy
