#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/gap_system.hpp"
#include "denjoy/grid_solver.hpp"
#include "denjoy/interval_set.hpp"

namespace denjoy {

struct Rect {
    double x0, x1, y0, y1;
};

// Discrete harmonic field on a rectangle. Slit nodes are the Dirichlet
// nodes on the real-axis row; when y = 0 is the bottom edge the non-slit
// bottom nodes get the reflected (Neumann) stencil.
struct GridField {
    Rect rect{};
    int nx = 0, ny = 0;
    double hx = 0, hy = 0;
    std::vector<double> values;        // row-major, j*nx + i
    std::vector<std::uint8_t> dirichlet;
    int iterations = 0;
    double residual = 0;
    bool slits_snapped = false;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    double x_of(int i) const { return rect.x0 + i * hx; }
    double y_of(int j) const { return rect.y0 + j * hy; }
};

struct BoundaryValues {
    std::function<double(double, double)> outer = [](double, double) { return 1.0; };
    double slit_value = 0.0;
};

// Solve the 5-point Laplace problem on rect with Dirichlet data from
// bc.outer on the outer boundary and bc.slit_value on the nodes covered
// by `slits` along the real axis (if the axis meets the rectangle).
// Slits thinner than a cell snap to the nearest node.
inline GridField solve_laplace(const Rect& rect, const std::vector<Interval>& slits,
                               const BoundaryValues& bc, int n) {
    if (n < 33 || n % 2 == 0)
        throw domain_error("solve_laplace: need odd n >= 33");
    if (!(rect.x0 < rect.x1 && rect.y0 < rect.y1))
        throw domain_error("solve_laplace: bad rectangle");
    int nx = n;
    double aspect = (rect.y1 - rect.y0) / (rect.x1 - rect.x0);
    int ny = std::max(3, static_cast<int>(std::lround(aspect * (n - 1))) + 1);
    GridSolver g(rect.x0, rect.x1, rect.y0, rect.y1, nx, ny);

    bool snapped = false;
    bool axis_inside = rect.y0 <= 0 && 0 <= rect.y1;
    int j_axis = axis_inside ? g.row_near(0.0) : -1;
    bool axis_is_bottom = axis_inside && j_axis == 0;

    // outer Dirichlet boundary; the bottom edge stays free (reflected)
    // when it carries the real axis
    for (int i = 0; i < nx; ++i) {
        if (!axis_is_bottom) g.set_dirichlet(i, 0, bc.outer(g.x_of(i), rect.y0));
        g.set_dirichlet(i, ny - 1, bc.outer(g.x_of(i), rect.y1));
    }
    for (int j = 0; j < ny; ++j) {
        g.set_dirichlet(0, j, bc.outer(rect.x0, g.y_of(j)));
        g.set_dirichlet(nx - 1, j, bc.outer(rect.x1, g.y_of(j)));
    }

    if (axis_inside && !slits.empty()) {
        if (std::abs(g.y_of(j_axis)) > 1e-12 * (rect.y1 - rect.y0)) snapped = true;
        for (const auto& s : slits) {
            if (!(s.lo <= s.hi)) throw domain_error("solve_laplace: bad slit");
            int i0 = g.col_near(std::max(s.lo, rect.x0));
            int i1 = g.col_near(std::min(s.hi, rect.x1));
            if (g.x_of(i0) < s.lo - 1e-12) ++i0;
            if (g.x_of(i1) > s.hi + 1e-12) --i1;
            if (i0 > i1) { // thinner than a cell: snap to the nearest node
                i0 = i1 = g.col_near(0.5 * (s.lo + s.hi));
                snapped = true;
            }
            for (int i = std::max(0, i0); i <= std::min(nx - 1, i1); ++i)
                g.set_dirichlet(i, j_axis, bc.slit_value);
        }
    }

    auto info = g.solve(1e-10);
    GridField f;
    f.rect = rect;
    f.nx = nx;
    f.ny = ny;
    f.hx = g.hx();
    f.hy = g.hy();
    f.values = g.values();
    f.dirichlet = g.dirichlet_mask();
    f.iterations = info.iterations;
    f.residual = info.residual;
    f.slits_snapped = snapped;
    return f;
}

struct BetaValue {
    double value = 0;          // beta_x(x) at the finest grid
    double error_estimate = 0; // |beta(n) - beta(2n-1)| when refined
    bool on_boundary = false;  // center node was a Dirichlet (E) node
};

namespace detail {

inline double beta_center_once(const GapSystem& E, double x, double alpha, int n,
                               bool& on_boundary) {
    double side = alpha * std::abs(x);
    Rect rect{x - side / 2, x + side / 2, -side / 2, side / 2};
    // E cap window: complement of the gaps inside the window
    GridField f;
    {
        std::vector<Interval> eparts;
        double cur = rect.x0;
        for (const auto& g : E.gaps()) {
            double lo = std::max(g.lo, rect.x0), hi = std::min(g.hi, rect.x1);
            if (hi <= lo) continue;
            if (lo > cur) eparts.push_back({cur, lo});
            cur = hi;
        }
        if (cur < rect.x1) eparts.push_back({cur, rect.x1});
        BoundaryValues bc;
        bc.outer = [](double, double) { return 1.0; };
        bc.slit_value = 0.0;
        f = solve_laplace(rect, eparts, bc, n);
    }
    int ic = (f.nx - 1) / 2, jc = (f.ny - 1) / 2;
    on_boundary = f.dirichlet[static_cast<std::size_t>(jc) * f.nx + ic] != 0;
    return f.at(ic, jc);
}

} // namespace detail

// Harmonic measure of the window boundary at the window center:
// beta_x = 1 on the boundary of R(x, alpha|x|), 0 on E inside.
inline BetaValue beta_x(const GapSystem& E, double x, double alpha, int n = 129,
                        bool estimate_error = true) {
    if (x == 0) throw domain_error("beta_x: x must be nonzero");
    if (!(alpha > 0 && alpha < 1)) throw domain_error("beta_x: need 0 < alpha < 1");
    BetaValue out;
    bool on_b = false;
    double coarse = detail::beta_center_once(E, x, alpha, n, on_b);
    out.on_boundary = on_b;
    if (on_b) {
        out.value = 0;
        out.error_estimate = 0;
        return out;
    }
    if (estimate_error) {
        double fine = detail::beta_center_once(E, x, alpha, 2 * n - 1, on_b);
        out.value = fine;
        out.error_estimate = std::abs(fine - coarse);
    } else {
        out.value = coarse;
    }
    return out;
}

struct BenedicksSample {
    double x = 0;
    double beta = 0;
};

struct BenedicksScan {
    std::vector<BenedicksSample> samples; // sorted by x
    std::vector<double> ladder_R;
    std::vector<double> ladder_I; // partial integrals of beta/|x| up to |x| <= R
    double alpha = 0;
    int grid_n = 0;
};

// Partial integrals I(R) of beta_x(x)/|x| over 1 <= |x| <= R. The sample
// grid is geometric (ratio 1.25, both signs) augmented with the midpoint
// of every gap in range, so periodic gap families cannot fall between
// consecutive sample points.
inline BenedicksScan benedicks_scan(const GapSystem& E, double alpha, double r_max,
                                    int grid_n = 129, double ratio = 1.25) {
    if (!(r_max > 1)) throw domain_error("benedicks_scan: need r_max > 1");
    if (!(ratio > 1)) throw domain_error("benedicks_scan: need ratio > 1");
    std::set<double> pos, neg;
    for (double x = 1.0; x <= r_max * (1 + 1e-12); x *= ratio) {
        pos.insert(x);
        neg.insert(-x);
    }
    pos.insert(r_max);
    neg.insert(-r_max);
    for (const auto& g : E.gaps_within(r_max)) {
        double mid = 0.5 * (g.lo + g.hi);
        if (mid >= 1 && mid <= r_max) pos.insert(mid);
        if (mid <= -1 && mid >= -r_max) neg.insert(mid);
    }

    BenedicksScan scan;
    scan.alpha = alpha;
    scan.grid_n = grid_n;
    for (double x : neg) scan.samples.push_back({x, 0});
    for (double x : pos) scan.samples.push_back({x, 0});
    for (auto& s : scan.samples)
        s.beta = beta_x(E, s.x, alpha, grid_n, false).value;

    for (double R = 10; R < r_max * (1 - 1e-12); R *= 10) scan.ladder_R.push_back(R);
    scan.ladder_R.push_back(r_max);

    auto partial = [&](double R) {
        double acc = 0;
        auto add_side = [&](bool positive) {
            std::vector<const BenedicksSample*> side;
            for (const auto& s : scan.samples)
                if ((s.x > 0) == positive && std::abs(s.x) <= R * (1 + 1e-12))
                    side.push_back(&s);
            std::sort(side.begin(), side.end(), [](auto* a, auto* b) {
                return std::abs(a->x) < std::abs(b->x);
            });
            for (std::size_t k = 0; k + 1 < side.size(); ++k) {
                double t0 = std::log(std::abs(side[k]->x));
                double t1 = std::log(std::abs(side[k + 1]->x));
                acc += 0.5 * (side[k]->beta + side[k + 1]->beta) * (t1 - t0);
            }
        };
        add_side(true);
        add_side(false);
        return acc;
    };
    for (double R : scan.ladder_R) scan.ladder_I.push_back(partial(R));
    return scan;
}

} // namespace denjoy
