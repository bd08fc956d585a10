#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "denjoy/common.hpp"

namespace denjoy {

// Conjugate-gradient solve of the weighted 5-point graph Laplacian on a
// rectangular grid. Dirichlet nodes carry fixed values; absent or
// zero-weight edges act as insulating (Neumann) boundary, so free
// boundary nodes get the natural one-sided stencil. Nodes unreachable
// from any Dirichlet node are pinned to zero.
class GridSolver {
public:
    GridSolver(double x0, double x1, double y0, double y1, int nx, int ny)
        : x0_(x0), x1_(x1), y0_(y0), y1_(y1), nx_(nx), ny_(ny),
          hx_((x1 - x0) / (nx - 1)), hy_((y1 - y0) / (ny - 1)),
          wh_(static_cast<std::size_t>(ny) * (nx - 1), hy_ / hx_),
          wv_(static_cast<std::size_t>(ny - 1) * nx, hx_ / hy_),
          dir_(static_cast<std::size_t>(ny) * nx, 0),
          val_(static_cast<std::size_t>(ny) * nx, 0.0) {
        if (nx < 3 || ny < 3) throw domain_error("GridSolver: grid too small");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double x_of(int i) const { return x0_ + i * hx_; }
    double y_of(int j) const { return y0_ + j * hy_; }
    int col_near(double x) const {
        return std::clamp(static_cast<int>(std::lround((x - x0_) / hx_)), 0, nx_ - 1);
    }
    int row_near(double y) const {
        return std::clamp(static_cast<int>(std::lround((y - y0_) / hy_)), 0, ny_ - 1);
    }

    // Halve the weights of edges lying inside the four boundary lines
    // (transverse trapezoid rule); makes the energy the exact Dirichlet
    // integral for grid-aligned linear fields.
    void use_boundary_trapezoid() {
        for (int i = 0; i < nx_ - 1; ++i) {
            wh_[h_idx(0, i)] *= 0.5;
            wh_[h_idx(ny_ - 1, i)] *= 0.5;
        }
        for (int j = 0; j < ny_ - 1; ++j) {
            wv_[v_idx(j, 0)] *= 0.5;
            wv_[v_idx(j, nx_ - 1)] *= 0.5;
        }
    }

    void set_dirichlet(int i, int j, double value) {
        dir_[n_idx(j, i)] = 1;
        val_[n_idx(j, i)] = value;
    }
    bool is_dirichlet(int i, int j) const { return dir_[n_idx(j, i)] != 0; }

    void cut_h(int j, int i) { wh_[h_idx(j, i)] = 0; }
    void cut_v(int j, int i) { wv_[v_idx(j, i)] = 0; }

    // Impermeable barrier along a polyline: every grid edge properly
    // crossed by a segment is removed. Exactly vertical segments snap to
    // the nearest inter-column line so the barrier has zero width.
    void cut_polyline(const std::vector<std::pair<double, double>>& pts) {
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            auto [px, py] = pts[k];
            auto [qx, qy] = pts[k + 1];
            if (px == qx) {
                double t = (px - x0_) / hx_ - 0.5;
                int i = std::clamp(static_cast<int>(std::lround(t)), 0, nx_ - 2);
                double ylo = std::min(py, qy), yhi = std::max(py, qy);
                for (int j = 0; j < ny_; ++j) {
                    double y = y_of(j);
                    if (y >= ylo - 0.5 * hy_ && y <= yhi + 0.49 * hy_) cut_h(j, i);
                }
            } else if (py == qy) {
                double t = (py - y0_) / hy_ - 0.5;
                int j = std::clamp(static_cast<int>(std::lround(t)), 0, ny_ - 2);
                double xlo = std::min(px, qx), xhi = std::max(px, qx);
                for (int i = 0; i < nx_; ++i) {
                    double x = x_of(i);
                    if (x >= xlo - 0.5 * hx_ && x <= xhi + 0.49 * hx_) cut_v(j, i);
                }
            } else {
                cut_general_segment(px, py, qx, qy);
            }
        }
    }

    struct SolveInfo {
        int iterations = 0;
        double residual = 0;
    };

    SolveInfo solve(double tol = 1e-10, int max_iter = 0) {
        pin_unreachable();
        const std::size_t N = dir_.size();
        std::vector<int> map(N, -1);
        std::vector<std::size_t> freeidx;
        for (std::size_t k = 0; k < N; ++k)
            if (!dir_[k]) {
                map[k] = static_cast<int>(freeidx.size());
                freeidx.push_back(k);
            }
        const std::size_t Nf = freeidx.size();
        u_.assign(val_.begin(), val_.end());
        if (Nf == 0) return {0, 0.0};

        std::vector<double> x(Nf, 0.0), b(Nf, 0.0), r(Nf), p(Nf), Ap(Nf);
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            std::fill(out.begin(), out.end(), 0.0);
            auto node_val = [&](std::size_t k) { return dir_[k] ? 0.0 : in[map[k]]; };
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_ - 1; ++i) {
                    double w = wh_[h_idx(j, i)];
                    if (w == 0) continue;
                    std::size_t a = n_idx(j, i), c = n_idx(j, i + 1);
                    double d = w * (node_val(a) - node_val(c));
                    if (!dir_[a]) out[map[a]] += d;
                    if (!dir_[c]) out[map[c]] -= d;
                }
            for (int j = 0; j < ny_ - 1; ++j)
                for (int i = 0; i < nx_; ++i) {
                    double w = wv_[v_idx(j, i)];
                    if (w == 0) continue;
                    std::size_t a = n_idx(j, i), c = n_idx(j + 1, i);
                    double d = w * (node_val(a) - node_val(c));
                    if (!dir_[a]) out[map[a]] += d;
                    if (!dir_[c]) out[map[c]] -= d;
                }
        };
        // b = -A x_dirichlet restricted to free nodes
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_ - 1; ++i) {
                double w = wh_[h_idx(j, i)];
                if (w == 0) continue;
                std::size_t a = n_idx(j, i), c = n_idx(j, i + 1);
                if (!dir_[a] && dir_[c]) b[map[a]] += w * val_[c];
                if (dir_[a] && !dir_[c]) b[map[c]] += w * val_[a];
            }
        for (int j = 0; j < ny_ - 1; ++j)
            for (int i = 0; i < nx_; ++i) {
                double w = wv_[v_idx(j, i)];
                if (w == 0) continue;
                std::size_t a = n_idx(j, i), c = n_idx(j + 1, i);
                if (!dir_[a] && dir_[c]) b[map[a]] += w * val_[c];
                if (dir_[a] && !dir_[c]) b[map[c]] += w * val_[a];
            }

        apply(x, Ap);
        double bnorm = 0;
        for (std::size_t k = 0; k < Nf; ++k) {
            r[k] = b[k] - Ap[k];
            p[k] = r[k];
            bnorm += b[k] * b[k];
        }
        bnorm = std::sqrt(std::max(bnorm, 1e-300));
        double rr = 0;
        for (double v : r) rr += v * v;
        if (max_iter == 0) max_iter = 30 * (nx_ + ny_) + 1000;
        int it = 0;
        while (std::sqrt(rr) > tol * bnorm && it < max_iter) {
            apply(p, Ap);
            double pAp = 0;
            for (std::size_t k = 0; k < Nf; ++k) pAp += p[k] * Ap[k];
            if (pAp <= 0) break;
            double al = rr / pAp;
            double rr2 = 0;
            for (std::size_t k = 0; k < Nf; ++k) {
                x[k] += al * p[k];
                r[k] -= al * Ap[k];
                rr2 += r[k] * r[k];
            }
            double beta = rr2 / rr;
            for (std::size_t k = 0; k < Nf; ++k) p[k] = r[k] + beta * p[k];
            rr = rr2;
            ++it;
        }
        double res = std::sqrt(rr) / bnorm;
        if (res > tol && it >= max_iter)
            throw solver_error("GridSolver: conjugate gradient did not converge");
        // project into the Dirichlet range; the exact discrete solution
        // satisfies the maximum principle, the CG iterate may overshoot
        // by the residual
        double vmin = 0, vmax = 0;
        bool any = false;
        for (std::size_t k = 0; k < N; ++k)
            if (dir_[k]) {
                if (!any) { vmin = vmax = val_[k]; any = true; }
                vmin = std::min(vmin, val_[k]);
                vmax = std::max(vmax, val_[k]);
            }
        for (std::size_t k = 0; k < Nf; ++k)
            u_[freeidx[k]] = any ? std::clamp(x[k], vmin, vmax) : x[k];
        return {it, res};
    }

    double value(int i, int j) const { return u_[n_idx(j, i)]; }
    const std::vector<double>& values() const { return u_; }
    const std::vector<std::uint8_t>& dirichlet_mask() const { return dir_; }

    double energy() const {
        double e = 0;
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_ - 1; ++i) {
                double d = u_[n_idx(j, i + 1)] - u_[n_idx(j, i)];
                e += wh_[h_idx(j, i)] * d * d;
            }
        for (int j = 0; j < ny_ - 1; ++j)
            for (int i = 0; i < nx_; ++i) {
                double d = u_[n_idx(j + 1, i)] - u_[n_idx(j, i)];
                e += wv_[v_idx(j, i)] * d * d;
            }
        return e;
    }

private:
    std::size_t n_idx(int j, int i) const { return static_cast<std::size_t>(j) * nx_ + i; }
    std::size_t h_idx(int j, int i) const { return static_cast<std::size_t>(j) * (nx_ - 1) + i; }
    std::size_t v_idx(int j, int i) const { return static_cast<std::size_t>(j) * nx_ + i; }

    void cut_general_segment(double px, double py, double qx, double qy) {
        auto cross = [&](double ax, double ay, double bx, double by) {
            double d1x = qx - px, d1y = qy - py;
            double d2x = bx - ax, d2y = by - ay;
            double den = d1x * d2y - d1y * d2x;
            if (den == 0) return false;
            double t = ((ax - px) * d2y - (ay - py) * d2x) / den;
            double s = ((ax - px) * d1y - (ay - py) * d1x) / den;
            return t >= -1e-12 && t <= 1 + 1e-12 && s >= -1e-12 && s <= 1 + 1e-12;
        };
        int i0 = std::max(0, col_near(std::min(px, qx)) - 2);
        int i1 = std::min(nx_ - 1, col_near(std::max(px, qx)) + 2);
        int j0 = std::max(0, row_near(std::min(py, qy)) - 2);
        int j1 = std::min(ny_ - 1, row_near(std::max(py, qy)) + 2);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i < i1; ++i)
                if (cross(x_of(i), y_of(j), x_of(i + 1), y_of(j))) cut_h(j, i);
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i <= i1; ++i)
                if (cross(x_of(i), y_of(j), x_of(i), y_of(j + 1))) cut_v(j, i);
    }

    void pin_unreachable() {
        std::vector<std::uint8_t> seen(dir_.size(), 0);
        std::queue<std::size_t> q;
        for (std::size_t k = 0; k < dir_.size(); ++k)
            if (dir_[k]) {
                seen[k] = 1;
                q.push(k);
            }
        while (!q.empty()) {
            std::size_t k = q.front();
            q.pop();
            int j = static_cast<int>(k) / nx_, i = static_cast<int>(k) % nx_;
            auto visit = [&](int jj, int ii, double w) {
                if (w == 0) return;
                std::size_t kk = n_idx(jj, ii);
                if (!seen[kk]) {
                    seen[kk] = 1;
                    q.push(kk);
                }
            };
            if (i > 0) visit(j, i - 1, wh_[h_idx(j, i - 1)]);
            if (i < nx_ - 1) visit(j, i + 1, wh_[h_idx(j, i)]);
            if (j > 0) visit(j - 1, i, wv_[v_idx(j - 1, i)]);
            if (j < ny_ - 1) visit(j + 1, i, wv_[v_idx(j, i)]);
        }
        for (std::size_t k = 0; k < dir_.size(); ++k)
            if (!seen[k]) {
                dir_[k] = 1;
                val_[k] = 0;
            }
    }

    double x0_, x1_, y0_, y1_;
    int nx_, ny_;
    double hx_, hy_;
    std::vector<double> wh_, wv_;
    std::vector<std::uint8_t> dir_;
    std::vector<double> val_;
    std::vector<double> u_;
};

} // namespace denjoy
