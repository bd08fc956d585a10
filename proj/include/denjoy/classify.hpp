#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "denjoy/comb.hpp"
#include "denjoy/common.hpp"
#include "denjoy/cover.hpp"
#include "denjoy/dirichlet.hpp"
#include "denjoy/equilibrium.hpp"
#include "denjoy/gap_system.hpp"
#include "denjoy/interval_set.hpp"

namespace denjoy {

enum class Verdict { Dim1, Dim2, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Dim1: return "dim1";
        case Verdict::Dim2: return "dim2";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct SeriesLadder {
    std::vector<double> R;
    std::vector<double> partial;
};

// Projected remaining tail assuming the increments keep shrinking at the
// last observed geometric rate; +inf when they do not shrink.
inline double tail_estimate(const SeriesLadder& s) {
    if (s.partial.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> inc;
    for (std::size_t i = 0; i + 1 < s.partial.size(); ++i)
        inc.push_back(s.partial[i + 1] - s.partial[i]);
    double last = inc.back();
    if (last <= 0) return 0;
    if (inc.size() < 2) return std::numeric_limits<double>::infinity();
    double prev = inc[inc.size() - 2];
    if (prev <= 0) return std::numeric_limits<double>::infinity();
    double q = last / prev;
    if (q >= 1) return std::numeric_limits<double>::infinity();
    return last * q / (1 - q);
}

// Smallest relative growth of the partial sums per decade of truncation.
inline double relative_growth_per_decade(const SeriesLadder& s) {
    if (s.partial.size() < 2) return 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < s.partial.size(); ++i) {
        double decades = std::log10(s.R[i + 1] / s.R[i]);
        if (decades <= 0) continue;
        double g;
        if (s.partial[i] <= 0)
            g = s.partial[i + 1] > 0 ? std::numeric_limits<double>::infinity() : 0;
        else
            g = (s.partial[i + 1] / s.partial[i] - 1) / decades;
        worst = std::min(worst, g);
    }
    return worst;
}

struct ClassifyOptions {
    std::vector<double> truncations{1e2, 1e3, 1e4};
    std::set<std::string> methods{"cover", "metric", "benedicks", "smoothness"};
    double alpha = 0.5;          // Benedicks window ratio
    int grid_n = 129;            // Benedicks grid
    int block_n = 96;            // nodes/component for block capacity ratios
    int smoothness_n = 128;      // nodes/component for the reduced compact set
    std::vector<double> smoothness_y{1e-1, 1e-2, 1e-3};
    double eps_tail = 1e-3;      // convergence evidence threshold for series tails
    double growth_min = 0.1;     // divergence evidence: relative growth per decade
    double ratio_floor = 0.01;   // (1.4) infimum floor
    double q_sup = 0.99;         // (1.6) supremum ceiling
    double density_floor = 0.01; // (1.8) infimum floor
    double benedicks_flat = 0.01;   // absolute I-increment per decade: flat below
    double benedicks_grow = 0.01;   // absolute I-increment per decade: growing above
    double remark3_shrink = 0.7;    // increment ratio for geometric shrinking
    double comb_base_spacing = 0.2; // comb-greedy grid parameter
    double greedy_upper = 0.5;      // merge stop constant (slit height / span)
    double greedy_lower = 1.0 / 6.0;
};

// Capacity ratio cap(E cap [a,b]) / cap([a,b]); 1 when the block is all
// set, 0 when the intersection has zero length.
inline double capacity_ratio(const GapSystem& E, double a, double b, int n = 96) {
    double len = b - a;
    auto pieces = E.intersect_interval(a, b);
    double mass = 0;
    for (const auto& p : pieces) mass += p.length();
    if (mass <= 0) return 0;
    if (mass >= len) return 1;
    std::vector<std::pair<double, double>> raw;
    for (const auto& p : pieces)
        if (p.length() > 0) raw.emplace_back(p.lo, p.hi);
    return capacity(IntervalSet::normalize(std::move(raw)), n) / (len / 4);
}

struct TheoremResult {
    SeriesLadder series;
    std::vector<double> ratio_extreme; // per truncation: min for Th.1, max for Th.2
    std::map<std::size_t, double> block_ratio; // by block index
    double tail = std::numeric_limits<double>::infinity();
    double growth = 0;
    bool evidence = false;
    bool half_line = false;
    std::vector<std::string> notes;
};

namespace detail {

inline void require_covering(const GapSystem& E, const CoverSystem& cover, double R) {
    for (const auto& gap : E.gaps_within(R)) {
        // parts of the gap not exempted must lie inside one open block
        std::vector<Interval> parts{gap};
        for (const auto& ex : cover.exempt) {
            std::vector<Interval> next;
            for (const auto& p : parts) {
                if (ex.hi <= p.lo || ex.lo >= p.hi) {
                    next.push_back(p);
                    continue;
                }
                if (p.lo < ex.lo) next.push_back({p.lo, ex.lo});
                if (ex.hi < p.hi) next.push_back({ex.hi, p.hi});
            }
            parts = std::move(next);
        }
        for (const auto& p : parts)
            if (!cover.covers(p)) {
                std::ostringstream os;
                os << "gap part (" << p.lo << "," << p.hi << ") not covered";
                throw domain_error("cover does not satisfy the covering condition: " + os.str());
            }
    }
}

} // namespace detail

// Theorem-1 style test: per-block capacity ratios (running minimum, for
// the infimum condition) and partial sums of ((b-a)/(|a|+1))^2 per
// truncation. Evidence for dim 2 = infimum bounded away from zero and a
// projected series tail below eps_tail.
inline TheoremResult theorem1_test(const GapSystem& E, const CoverSystem& cover,
                                   const std::vector<double>& truncations,
                                   const ClassifyOptions& opts = {}) {
    cover.check_ordering();
    TheoremResult res;
    double Rmax = *std::max_element(truncations.begin(), truncations.end());
    detail::require_covering(E, cover, Rmax);
    for (std::size_t j = 0; j < cover.blocks.size(); ++j) {
        const auto& blk = cover.blocks[j];
        if (blk.a < -Rmax || blk.b > Rmax) continue;
        res.block_ratio[j] = capacity_ratio(E, blk.a, blk.b, opts.block_n);
    }
    for (double R : truncations) {
        double sum = 0;
        double rmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cover.blocks.size(); ++j) {
            const auto& blk = cover.blocks[j];
            if (blk.a < -R || blk.b > R) continue;
            double t = blk.b - blk.a;
            sum += (t / (std::abs(blk.a) + 1)) * (t / (std::abs(blk.a) + 1));
            rmin = std::min(rmin, res.block_ratio.at(j));
        }
        res.series.R.push_back(R);
        res.series.partial.push_back(sum);
        res.ratio_extreme.push_back(std::isinf(rmin) ? 1.0 : rmin);
    }
    res.tail = tail_estimate(res.series);
    double overall_min = 1.5;
    for (double r : res.ratio_extreme) overall_min = std::min(overall_min, r);
    res.evidence = overall_min >= opts.ratio_floor && res.tail < opts.eps_tail;
    if (!cover.exempt.empty()) {
        std::ostringstream os;
        os << cover.exempt.size() << " dyadic block(s) exempted from covering";
        res.notes.push_back(os.str());
    }
    return res;
}

// Theorem-2 style test: the supremum of the capacity ratios must stay
// below q_sup while the partial sums of ((b-a)/(|a+b|+1))^2 keep growing
// by at least growth_min per decade. A half-line gap short-circuits to
// dim 1.
inline TheoremResult theorem2_test(const GapSystem& E, const CoverSystem& cover,
                                   const std::vector<double>& truncations,
                                   const ClassifyOptions& opts = {}) {
    TheoremResult res;
    if (E.has_unbounded_gap()) {
        res.half_line = true;
        res.evidence = true;
        res.notes.push_back("half-line gap: dim P_inf = 1 directly");
        return res;
    }
    cover.check_ordering();
    double Rmax = *std::max_element(truncations.begin(), truncations.end());
    for (std::size_t j = 0; j < cover.blocks.size(); ++j) {
        const auto& blk = cover.blocks[j];
        if (blk.a < -Rmax || blk.b > Rmax) continue;
        res.block_ratio[j] = capacity_ratio(E, blk.a, blk.b, opts.block_n);
    }
    for (double R : truncations) {
        double sum = 0;
        double rmax = 0;
        for (std::size_t j = 0; j < cover.blocks.size(); ++j) {
            const auto& blk = cover.blocks[j];
            if (blk.a < -R || blk.b > R) continue;
            double t = blk.b - blk.a;
            double den = std::abs(blk.a + blk.b) + 1;
            sum += (t / den) * (t / den);
            rmax = std::max(rmax, res.block_ratio.at(j));
        }
        res.series.R.push_back(R);
        res.series.partial.push_back(sum);
        res.ratio_extreme.push_back(rmax);
    }
    res.growth = relative_growth_per_decade(res.series);
    double overall_max = 0;
    for (double r : res.ratio_extreme) overall_max = std::max(overall_max, r);
    res.evidence = overall_max <= opts.q_sup && res.growth >= opts.growth_min;
    return res;
}

struct Remark1Result {
    double min_density = 1;
    std::vector<double> densities;
};

inline Remark1Result metric_test_remark1(const GapSystem& E, const CoverSystem& cover) {
    cover.check_ordering();
    Remark1Result res;
    for (const auto& blk : cover.blocks) {
        double d = lebesgue_density(E, blk.a, blk.b);
        res.densities.push_back(d);
        res.min_density = std::min(res.min_density, d);
    }
    return res;
}

struct Remark3Result {
    SeriesLadder ladder; // partial integrals of theta^2 / t^3 from 1 to R
    bool convergent = false;
};

// Exact piecewise integration: theta_E is piecewise linear with
// breakpoints at |gap endpoint| values.
inline Remark3Result metric_test_remark3(const GapSystem& E, double R_max,
                                         const ClassifyOptions& opts = {}) {
    if (!(R_max > 1)) throw domain_error("metric_test_remark3: need R_max > 1");
    std::set<double> bps{1.0, R_max};
    for (const auto& g : E.gaps()) {
        for (double v : {std::abs(g.lo), std::abs(g.hi)})
            if (std::isfinite(v) && v > 1 && v < R_max) bps.insert(v);
    }
    for (double R = 10; R < R_max; R *= 10) bps.insert(R);

    auto segment = [&](double t0, double t1) {
        double th0 = E.theta(t0), th1 = E.theta(t1);
        double s = (th1 - th0) / (t1 - t0);
        double A = th0 - s * t0;
        auto eval = [&](double t) {
            return -A * A / (2 * t * t) - 2 * A * s / t + s * s * std::log(t);
        };
        return eval(t1) - eval(t0);
    };

    Remark3Result res;
    double acc = 0, prev = 1.0;
    std::vector<double> decade_R;
    for (double R = 10; R < R_max; R *= 10) decade_R.push_back(R);
    decade_R.push_back(R_max);
    std::size_t di = 0;
    for (auto it = std::next(bps.begin()); it != bps.end(); ++it) {
        acc += segment(prev, *it);
        prev = *it;
        while (di < decade_R.size() && std::abs(prev - decade_R[di]) < 1e-12 * prev) {
            res.ladder.R.push_back(decade_R[di]);
            res.ladder.partial.push_back(acc);
            ++di;
        }
    }
    std::vector<double> inc;
    for (std::size_t i = 0; i + 1 < res.ladder.partial.size(); ++i)
        inc.push_back(res.ladder.partial[i + 1] - res.ladder.partial[i]);
    res.convergent = !inc.empty();
    for (std::size_t i = 0; i + 1 < inc.size(); ++i)
        if (!(inc[i + 1] <= opts.remark3_shrink * inc[i] + 1e-15)) res.convergent = false;
    if (inc.size() == 1) res.convergent = inc[0] < opts.eps_tail;
    return res;
}

// Increasing gap-budget function for the Remark-4 constructor.
class ThetaSpec {
public:
    static ThetaSpec power(double gamma, double c = 1.0) {
        if (!(gamma > 0 && gamma <= 1)) throw domain_error("ThetaSpec: need 0 < gamma <= 1");
        if (!(c > 0 && c <= 2)) throw domain_error("ThetaSpec: need 0 < c <= 2");
        ThetaSpec t;
        t.gamma_ = gamma;
        t.c_ = c;
        return t;
    }

    static ThetaSpec table(std::vector<std::pair<double, double>> samples) {
        if (samples.size() < 2) throw domain_error("ThetaSpec: table needs >= 2 samples");
        std::sort(samples.begin(), samples.end());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            auto [t, th] = samples[i];
            if (!(t >= 1)) throw domain_error("ThetaSpec: table abscissae must be >= 1");
            if (!(th > 0 && th <= 2 * t))
                throw domain_error("ThetaSpec: table values must satisfy 0 < theta(t) <= 2t");
            if (i > 0 && samples[i - 1].second > th)
                throw domain_error("ThetaSpec: table must be nondecreasing");
        }
        ThetaSpec t;
        t.samples_ = std::move(samples);
        return t;
    }

    double operator()(double t) const {
        if (samples_.empty()) return c_ * std::pow(t, gamma_);
        if (t <= samples_.front().first) return samples_.front().second;
        if (t >= samples_.back().first) return samples_.back().second;
        auto it = std::lower_bound(samples_.begin(), samples_.end(),
                                   std::make_pair(t, 0.0));
        auto lo = std::prev(it);
        double w = (t - lo->first) / (it->first - lo->first);
        return lo->second + w * (it->second - lo->second);
    }

    bool is_power() const { return samples_.empty(); }
    double gamma() const { return gamma_; }
    double scale() const { return c_; }

private:
    double gamma_ = 1, c_ = 1;
    std::vector<std::pair<double, double>> samples_;
};

// E* = union over j of (2^j, 2^j + (theta(2^j) - theta(2^{j-1})) / 4);
// guarantees theta_E(t) <= theta(t) for t > 2. Empty gaps are dropped.
inline GapSystem construct_remark4(const ThetaSpec& theta, int levels) {
    if (levels < 1) throw domain_error("construct_remark4: need levels >= 1");
    std::vector<Interval> gaps;
    double prev = theta(1.0);
    if (!(prev > 0)) throw domain_error("construct_remark4: theta must be positive");
    for (int j = 1; j <= levels; ++j) {
        double t = std::ldexp(1.0, j); // 2^j
        double cur = theta(t);
        if (cur < prev) throw domain_error("construct_remark4: theta must be increasing");
        if (!(cur <= 2 * t))
            throw domain_error("construct_remark4: theta violates theta(t) <= 2t");
        double len = 0.25 * (cur - prev);
        if (len > 0) gaps.push_back({t, t + len});
        prev = cur;
    }
    return GapSystem(std::move(gaps), std::ldexp(1.0, levels + 1));
}

struct EvidenceItem {
    std::string method;
    int direction = 0; // 1 or 2
    std::string detail;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Inconclusive;
    std::string rationale;
    std::vector<EvidenceItem> evidence;
    std::optional<TheoremResult> theorem1, theorem2;
    std::optional<TheoremResult> theorem1_comb, theorem2_comb;
    std::optional<Remark1Result> remark1;
    std::optional<Remark3Result> remark3;
    std::optional<BenedicksScan> benedicks;
    std::vector<double> smoothness_R;
    std::vector<std::vector<double>> smoothness_ratios; // [R index][y index]
    ClassifyOptions options;
    std::vector<std::string> notes;
};

// Run the selected criteria and merge the evidence. Any conflicting
// evidence forces an inconclusive verdict with all diagnostics attached.
inline ClassificationReport classify(const GapSystem& E, const ClassifyOptions& opts = {}) {
    ClassificationReport rep;
    rep.options = opts;
    if (opts.truncations.empty()) throw domain_error("classify: no truncations");
    std::vector<double> truncs = opts.truncations;
    std::sort(truncs.begin(), truncs.end());
    double Rmax = truncs.back();

    auto vote = [&](const std::string& method, int dir, const std::string& detail) {
        rep.evidence.push_back({method, dir, detail});
    };

    bool half_line = E.has_unbounded_gap();
    if (half_line) vote("half_line", 1, "a half-line belongs to E*");

    if (opts.methods.count("cover") && !half_line) {
        CoverSystem dyadic = cover_dyadic_density(E, Rmax);
        rep.theorem1 = theorem1_test(E, dyadic, truncs, opts);
        if (rep.theorem1->evidence)
            vote("theorem1", 2, "capacity-ratio infimum and convergent (1.5) series on the dyadic cover");
        CoverSystem plain = cover_from_gaps(E);
        rep.theorem2 = theorem2_test(E, plain, truncs, opts);
        if (rep.theorem2->evidence)
            vote("theorem2", 1, "ratio supremum below 1 with divergent (1.7) series on the gap cover");
    } else if (opts.methods.count("cover") && half_line) {
        CoverSystem empty;
        rep.theorem2 = theorem2_test(E, empty, truncs, opts);
    }

    if (opts.methods.count("metric") && !half_line) {
        CoverSystem dyadic = cover_dyadic_density(E, Rmax);
        rep.remark1 = metric_test_remark1(E, dyadic);
        rep.remark3 = metric_test_remark3(E, Rmax, opts);
        if (rep.theorem1 && rep.remark1->min_density >= opts.density_floor &&
            rep.theorem1->tail < opts.eps_tail)
            vote("remark1", 2, "Lebesgue density infimum with convergent (1.5) series");
        if (rep.remark3->convergent)
            vote("remark3", 2, "theta integral increments shrink geometrically");
    }

    if (opts.methods.count("comb") && !half_line && !E.gaps().empty()) {
        std::size_t pivot = default_pivot(E);
        auto [F, w] = gaps_to_compact(E, pivot);
        CombMap comb(F, opts.smoothness_n);
        CombData cd = comb.comb_data();
        CoverSystem comb_cover = cover_comb_greedy(cd, opts.comb_base_spacing,
                                                   opts.greedy_upper, opts.greedy_lower);
        CoverSystem pulled = cover_pullback(comb, comb_cover, w);
        // the pivot gap has no slit image; cover it by its own endpoints
        const auto& pg = E.gaps()[pivot];
        pulled.blocks.push_back({pg.lo, pg.hi, BlockTag::Plain});
        std::sort(pulled.blocks.begin(), pulled.blocks.end(),
                  [](const CoverBlock& x, const CoverBlock& y) { return x.a < y.a; });
        rep.theorem1_comb = theorem1_test(E, pulled, truncs, opts);
        rep.theorem2_comb = theorem2_test(E, pulled, truncs, opts);
        if (rep.theorem1_comb->evidence)
            vote("theorem1_comb", 2, "comb-greedy cover passes the Theorem-1 criteria");
        if (rep.theorem2_comb->evidence)
            vote("theorem2_comb", 1, "comb-greedy cover passes the Theorem-2 criteria");
    }

    if (opts.methods.count("benedicks")) {
        rep.benedicks = benedicks_scan(E, opts.alpha, Rmax, opts.grid_n);
        const auto& I = rep.benedicks->ladder_I;
        if (I.size() >= 2) {
            bool flat = true, growing = true;
            for (std::size_t i = 0; i + 1 < I.size(); ++i) {
                double inc = I[i + 1] - I[i];
                if (inc >= opts.benedicks_flat) flat = false;
                if (inc < opts.benedicks_grow) growing = false;
            }
            if (growing) vote("benedicks", 1, "partial integrals grow every decade");
            else if (flat) vote("benedicks", 2, "partial integrals flatten");
        }
    }

    if (opts.methods.count("smoothness") && !half_line && !E.gaps().empty()) {
        bool has_bounded = false;
        for (const auto& g : E.gaps())
            if (std::isfinite(g.lo) && std::isfinite(g.hi)) has_bounded = true;
        if (has_bounded) {
            std::vector<double> sup_ratio;
            for (double R : truncs) {
                GapSystem ER(E.gaps_within(R), R);
                auto [F, w] = gaps_to_compact(ER, default_pivot(ER));
                auto ratios = smoothness_ratio(F, opts.smoothness_y, opts.smoothness_n);
                rep.smoothness_R.push_back(R);
                rep.smoothness_ratios.push_back(ratios);
                sup_ratio.push_back(*std::max_element(ratios.begin(), ratios.end()));
            }
            SeriesLadder lad{rep.smoothness_R, sup_ratio};
            double growth = relative_growth_per_decade(lad);
            if (growth >= opts.growth_min)
                vote("smoothness", 1, "g(iy)/y supremum grows with truncation depth");
            else if (growth <= opts.growth_min / 5)
                vote("smoothness", 2, "g(iy)/y supremum stable across truncations");
        }
    }

    bool any1 = false, any2 = false;
    for (const auto& e : rep.evidence) {
        if (e.direction == 1) any1 = true;
        if (e.direction == 2) any2 = true;
    }
    std::ostringstream why;
    if (any1 && !any2) {
        rep.verdict = Verdict::Dim1;
        why << "dim P_inf = 1: ";
    } else if (any2 && !any1) {
        rep.verdict = Verdict::Dim2;
        why << "dim P_inf = 2: ";
    } else if (any1 && any2) {
        rep.verdict = Verdict::Inconclusive;
        why << "conflicting evidence: ";
    } else {
        rep.verdict = Verdict::Inconclusive;
        why << "no criterion produced evidence";
    }
    for (std::size_t i = 0; i < rep.evidence.size(); ++i) {
        if (i) why << "; ";
        why << rep.evidence[i].method << " -> dim" << rep.evidence[i].direction;
    }
    rep.rationale = why.str();
    return rep;
}

} // namespace denjoy
