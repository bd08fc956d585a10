#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/equilibrium.hpp"
#include "denjoy/grid_solver.hpp"
#include "denjoy/interval_set.hpp"

namespace denjoy {

enum class BoundKind { Exact, Lower, Upper };

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Exact: return "exact";
        case BoundKind::Lower: return "lower";
        case BoundKind::Upper: return "upper";
    }
    return "?";
}

struct ModuleBound {
    std::string family;
    std::map<std::string, double> params;
    double value = 0;
    BoundKind kind = BoundKind::Exact;
};

namespace detail {

inline double param(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw domain_error("module_formula: missing parameter " + key);
    return it->second;
}

} // namespace detail

// Closed-form module values and bounds for the curve families. Exact for
// the half-annulus families, one-sided bounds elsewhere; the kind tag
// says which.
inline ModuleBound module_formula(const std::string& family,
                                  const std::map<std::string, double>& params) {
    using detail::param;
    ModuleBound out{family, params, 0, BoundKind::Exact};
    if (family == "gamma1" || family == "gamma2") {
        double r1 = param(params, "r1"), r2 = param(params, "r2");
        if (!(0 < r1 && r1 < r2)) throw domain_error(family + ": need 0 < r1 < r2");
        out.value = family == "gamma1" ? std::log(r2 / r1) / pi : pi / std::log(r2 / r1);
        out.kind = BoundKind::Exact;
    } else if (family == "gamma3") {
        double a = param(params, "a"), b = param(params, "b"), c = param(params, "c");
        if (!(a < b && c > 0)) throw domain_error("gamma3: need a < b and c > 0");
        double q = 2 * c / (b - a);
        out.value = std::log(q + std::sqrt(1 + q * q)) / pi;
        out.kind = BoundKind::Lower;
    } else if (family == "gamma4") {
        double r = param(params, "r"), R = param(params, "R");
        if (!(0 < r && r < R)) throw domain_error("gamma4: need 0 < r < R");
        out.value = pi / (4 * std::log(4 * R / r));
        out.kind = BoundKind::Lower;
    } else if (family == "gamma5") {
        double r = param(params, "r"), R = param(params, "R");
        if (!(0 < r && r < R)) throw domain_error("gamma5: need 0 < r < R");
        out.value = std::log(4 * R / r) / pi;
        out.kind = BoundKind::Upper;
    } else if (family == "gamma6") {
        double a = param(params, "a"), b = param(params, "b"), c = param(params, "c");
        if (!(a < b && b < c)) throw domain_error("gamma6: need a < b < c");
        out.value = std::log(16 * (c - a) / (c - b)) / pi;
        out.kind = BoundKind::Upper;
    } else if (family == "gamma7") {
        double a = param(params, "a");
        if (!(a > 0)) throw domain_error("gamma7: need a > 0");
        out.value = a >= 0.5 * std::log(2.0) ? 0.5 : pi / (2 * std::log(12 / a));
        out.kind = BoundKind::Lower;
    } else if (family == "gamma8") {
        double b = param(params, "b"), c = param(params, "c");
        if (!(0 < b && b < c)) throw domain_error("gamma8: need 0 < b < c");
        double d = c - b;
        out.value = d >= 0.5 * std::log(2.0) ? 0.25 : pi / (4 * std::log(12 / d));
        out.kind = BoundKind::Lower;
    } else if (family == "gamma9") {
        double a = param(params, "a"), b = param(params, "b"), c = param(params, "c");
        if (!(0 < a && a < b && c > 0)) throw domain_error("gamma9: need 0 < a < b, c > 0");
        out.value = std::log(b * b / (c * c + (b - a) * (b - a))) / (2 * pi);
        out.kind = BoundKind::Lower;
    } else if (family == "gamma10") {
        double a = param(params, "a"), b = param(params, "b"), cap_s = param(params, "cap_s");
        if (!(0 < a && a < b)) throw domain_error("gamma10: need 0 < a < b");
        if (!(std::log(b / a) < pi / 2))
            throw domain_error("gamma10: need log(b/a) < pi/2");
        if (!(cap_s > 0)) throw domain_error("gamma10: need cap(S) > 0");
        double C = 0.5 * (std::exp(pi) + 1);
        out.value = 2 / pi * std::log(C * (b - a) / cap_s);
        out.kind = BoundKind::Upper;
    } else if (family == "groetzsch_mu") {
        double t = param(params, "t");
        if (!(0 < t && t < 1)) throw domain_error("groetzsch_mu: need 0 < t < 1");
        out.value = std::log(4 / t);
        out.kind = BoundKind::Upper;
    } else {
        throw domain_error("module_formula: unknown family " + family);
    }
    return out;
}

inline ModuleBound gamma10_upper(double a, double b, const IntervalSet& S, int n = 256) {
    if (S.inf() < a || S.sup() > b)
        throw domain_error("gamma10: S must lie inside [a,b]");
    return module_formula("gamma10", {{"a", a}, {"b", b}, {"cap_s", capacity(S, n)}});
}

struct Slit {
    double u = 0; // foot on the real axis
    double v = 0; // height
};

// Upper bound for the slit half-annulus crossing family: curves joining
// |w| = r and |w| = 2R in the upper half-plane minus vertical slits.
inline ModuleBound gamma12_upper(double r, double R, const std::vector<Slit>& slits) {
    if (!(0 < r && r < R)) throw domain_error("gamma12: need 0 < r < R");
    double sum = 0;
    for (std::size_t j = 0; j < slits.size(); ++j) {
        const auto& s = slits[j];
        double au = std::abs(s.u);
        if (!(r <= au && au <= R))
            throw domain_error("gamma12: slit feet must satisfy r <= |u| <= R");
        if (s.v < 0 || s.v > au)
            throw domain_error("gamma12: need 0 <= v <= |u|");
        // neighbour room: each slit needs a bracket disjoint from its
        // neighbours' on the same side of 0
        double lo = s.u > 0 ? r : -R, hi = s.u > 0 ? R : -r;
        if (j > 0 && slits[j - 1].u * s.u > 0) lo = slits[j - 1].u;
        if (j + 1 < slits.size() && slits[j + 1].u * s.u > 0) hi = slits[j + 1].u;
        if (s.v > hi - lo)
            throw domain_error("gamma12: slit taller than its available bracket");
        sum += (s.v / s.u) * (s.v / s.u);
    }
    double L = std::log(2 * R / r);
    ModuleBound out;
    out.family = "gamma12";
    out.params = {{"r", r}, {"R", R}};
    out.value = (pi * L - 1e-5 * sum) / (L * L);
    out.kind = BoundKind::Upper;
    return out;
}

// Upper bound for the two-ray separating family on {1 < |z| < T}:
// blocks (a_j,b_j) inside [-T,-1] u [1,T] with capacity ratio >= q.
inline ModuleBound gamma13_upper(double T, const IntervalSet& S,
                                 const std::vector<Interval>& blocks, double q,
                                 int n = 128) {
    if (!(T > 1)) throw domain_error("gamma13: need T > 1");
    if (!(q > 0 && q < 1)) throw domain_error("gamma13: need 0 < q < 1");
    double sum = 0;
    for (const auto& blk : blocks) {
        if (!(blk.lo < blk.hi)) throw domain_error("gamma13: degenerate block");
        double lo = std::abs(blk.lo), hi = std::abs(blk.hi);
        if (blk.lo * blk.hi <= 0 || std::min(lo, hi) < 1 || std::max(lo, hi) > T)
            throw domain_error("gamma13: blocks must lie inside [-T,-1] u [1,T]");
        double aspect = blk.length() / std::min(lo, hi);
        if (!(aspect < pi / 2))
            throw domain_error("gamma13: block aspect must be below pi/2");
        auto pieces = S.clip(blk.lo, blk.hi);
        double ratio = 0;
        if (!pieces.empty()) {
            IntervalSet piece_set = IntervalSet::normalize(
                [&] {
                    std::vector<std::pair<double, double>> raw;
                    for (const auto& p : pieces) raw.emplace_back(p.lo, p.hi);
                    return raw;
                }());
            ratio = capacity(piece_set, n) / (blk.length() / 4);
        }
        if (ratio < q)
            throw domain_error("gamma13: capacity ratio below q on a block");
        sum += aspect * aspect;
    }
    double C = 2 / pi * std::log(100.0 / q);
    double L = std::log(T);
    ModuleBound out;
    out.family = "gamma13";
    out.params = {{"T", T}, {"q", q}};
    out.value = (pi * L + C * sum) / (L * L);
    out.kind = BoundKind::Upper;
    return out;
}

// Quadrilateral for the numeric estimator: a rectangle with two marked
// boundary arc sets (Dirichlet 1 and 0), everything else insulating, and
// optional impermeable barriers (slits / obstacle outlines) given as
// polylines. Annular geometries are posed in log-polar coordinates by
// the builders below.
struct BoundaryArc {
    enum Side { Bottom, Top, Left, Right };
    Side side;
    double from, to; // coordinate range along the side
};

struct Quadrilateral {
    double x0, x1, y0, y1;
    std::vector<BoundaryArc> arc_one;
    std::vector<BoundaryArc> arc_zero;
    std::vector<std::vector<std::pair<double, double>>> barriers;
};

namespace detail {

inline void mark_arcs(GridSolver& g, const std::vector<BoundaryArc>& arcs, double value) {
    for (const auto& a : arcs) {
        double eps = 1e-9 * (std::abs(a.to - a.from) + 1);
        if (a.side == BoundaryArc::Bottom || a.side == BoundaryArc::Top) {
            int j = a.side == BoundaryArc::Bottom ? 0 : g.ny() - 1;
            for (int i = 0; i < g.nx(); ++i) {
                double x = g.x_of(i);
                if (x >= a.from - eps && x <= a.to + eps) g.set_dirichlet(i, j, value);
            }
        } else {
            int i = a.side == BoundaryArc::Left ? 0 : g.nx() - 1;
            for (int j = 0; j < g.ny(); ++j) {
                double y = g.y_of(j);
                if (y >= a.from - eps && y <= a.to + eps) g.set_dirichlet(i, j, value);
            }
        }
    }
}

inline double quad_energy(const Quadrilateral& Q, int n) {
    int nx = n;
    double aspect = (Q.y1 - Q.y0) / (Q.x1 - Q.x0);
    int ny = std::max(3, static_cast<int>(std::lround(aspect * (n - 1))) + 1);
    GridSolver g(Q.x0, Q.x1, Q.y0, Q.y1, nx, ny);
    g.use_boundary_trapezoid();
    for (const auto& pl : Q.barriers) g.cut_polyline(pl);
    mark_arcs(g, Q.arc_one, 1.0);
    mark_arcs(g, Q.arc_zero, 0.0);
    g.solve(1e-10);
    return g.energy();
}

} // namespace detail

// Modulus of the family of curves joining the two marked arcs, as the
// Dirichlet energy of the mixed-boundary harmonic field, Richardson
// extrapolated over n and 2n-1.
inline double numeric_modulus(const Quadrilateral& Q, int n = 129) {
    if (n < 65) throw domain_error("numeric_modulus: need n >= 65");
    if (!(Q.x0 < Q.x1 && Q.y0 < Q.y1)) throw domain_error("numeric_modulus: bad rectangle");
    if (Q.arc_one.empty() || Q.arc_zero.empty())
        throw domain_error("numeric_modulus: both arcs must be nonempty");
    double coarse = detail::quad_energy(Q, n);
    double fine = detail::quad_energy(Q, 2 * n - 1);
    return 2 * fine - coarse;
}

// ---- geometry builders ----

// Half-annulus r1 < |w| < r2 in H, posed on [log r1, log r2] x [0, pi].
// radial=true marks the two circular arcs (the radial-crossing family,
// gamma2); radial=false marks the two real-axis sides (gamma1).
inline Quadrilateral half_annulus_quad(double r1, double r2, bool radial) {
    if (!(0 < r1 && r1 < r2)) throw domain_error("half_annulus_quad: need 0 < r1 < r2");
    Quadrilateral Q{std::log(r1), std::log(r2), 0.0, pi, {}, {}, {}};
    if (radial) {
        Q.arc_one = {{BoundaryArc::Left, 0.0, pi}};
        Q.arc_zero = {{BoundaryArc::Right, 0.0, pi}};
    } else {
        Q.arc_one = {{BoundaryArc::Bottom, std::log(r1), std::log(r2)}};
        Q.arc_zero = {{BoundaryArc::Top, std::log(r1), std::log(r2)}};
    }
    return Q;
}

// Gamma6 family joining (a,b) and (c,inf) in H, truncated at scale K.
inline Quadrilateral gamma6_quad(double a, double b, double c, double K = 12) {
    if (!(a < b && b < c)) throw domain_error("gamma6_quad: need a < b < c");
    double L = c - a;
    Quadrilateral Q{a - K * L, c + K * L, 0.0, K * L, {}, {}, {}};
    Q.arc_one = {{BoundaryArc::Bottom, a, b}};
    Q.arc_zero = {{BoundaryArc::Bottom, c, Q.x1}};
    return Q;
}

// Gamma9 family joining (0,a) and (b,inf) in H minus the block
// [a,b] x (0,c], truncated at scale K.
inline Quadrilateral gamma9_quad(double a, double b, double c, double K = 10) {
    if (!(0 < a && a < b && c > 0)) throw domain_error("gamma9_quad: need 0 < a < b, c > 0");
    Quadrilateral Q{-K * b, K * b, 0.0, K * b, {}, {}, {}};
    Q.arc_one = {{BoundaryArc::Bottom, 0, a}};
    Q.arc_zero = {{BoundaryArc::Bottom, b, Q.x1}};
    Q.barriers = {{{a, 0}, {a, c}, {b, c}, {b, 0}}};
    return Q;
}

// Gamma12 family joining |w| = r and |w| = 2R in the slit half-annulus,
// posed in log-polar coordinates; slits become curved barriers.
inline Quadrilateral gamma12_quad(double r, double R, const std::vector<Slit>& slits) {
    if (!(0 < r && r < R)) throw domain_error("gamma12_quad: need 0 < r < R");
    Quadrilateral Q{std::log(r), std::log(2 * R), 0.0, pi, {}, {}, {}};
    Q.arc_one = {{BoundaryArc::Left, 0.0, pi}};
    Q.arc_zero = {{BoundaryArc::Right, 0.0, pi}};
    for (const auto& s : slits) {
        std::vector<std::pair<double, double>> pl;
        const int K = 200;
        for (int k = 0; k <= K; ++k) {
            Complex z(s.u, s.v * k / K);
            pl.emplace_back(std::log(std::abs(z)), std::arg(z));
        }
        Q.barriers.push_back(std::move(pl));
    }
    return Q;
}

// Truncated comb strip [0,pi] x [0,Y] with the comb slits as barriers;
// marked arcs are the two vertical walls (the wall-to-wall crossing
// family used in the slit-height bound).
inline Quadrilateral comb_strip_quad(const std::vector<Slit>& slits, double Y) {
    if (!(Y > 0)) throw domain_error("comb_strip_quad: need Y > 0");
    Quadrilateral Q{0.0, pi, 0.0, Y, {}, {}, {}};
    Q.arc_one = {{BoundaryArc::Left, 0.0, Y}};
    Q.arc_zero = {{BoundaryArc::Right, 0.0, Y}};
    for (const auto& s : slits)
        Q.barriers.push_back({{s.u, 0.0}, {s.u, std::min(s.v, Y)}});
    return Q;
}

inline Quadrilateral unit_square_quad() {
    Quadrilateral Q{0, 1, 0, 1, {}, {}, {}};
    Q.arc_one = {{BoundaryArc::Bottom, 0, 1}};
    Q.arc_zero = {{BoundaryArc::Top, 0, 1}};
    return Q;
}

} // namespace denjoy
