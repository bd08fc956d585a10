#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/equilibrium.hpp"
#include "denjoy/gap_system.hpp"
#include "denjoy/interval_set.hpp"
#include "denjoy/mobius.hpp"

namespace denjoy {

// One vertical slit of the comb domain Sigma_F: the image of an interior
// gap of F. u in (0,pi) is the slit foot, v > 0 its height; v equals the
// maximum of the Green function over the closed gap.
struct SlitRecord {
    std::size_t gap_index; // index into the interior gap list of F
    double u = 0;
    double v = 0;
};

struct CombData {
    std::vector<SlitRecord> slits;
    std::optional<double> u0; // Re psi(0) when 0 lies in F
};

namespace detail {

inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = f(d);
        } else {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Gauss-Legendre nodes/weights on (-1,1), Newton on the recurrence.
inline void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
    x.assign(k, 0.0);
    w.assign(k, 0.0);
    for (int i = 0; i < (k + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (k + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = t;
            for (int j = 2; j <= k; ++j) {
                double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1; p1 = p2;
            }
            dp = k * (t * p1 - p0) / (t * t - 1);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[k - 1 - i] = t;
        w[i] = w[k - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
    }
}

} // namespace detail

// The comb conformal map psi of the upper half-plane onto the slit
// half-strip Sigma_F, realized through the equilibrium potential:
// psi(z) = pi + i (int log(z - zeta) dmu_F - log cap F), branch with
// arg(z - zeta) in [0, pi]. g_G = Im psi vanishes exactly on F.
class CombMap {
public:
    explicit CombMap(IntervalSet F, int n = 256)
        : F_(std::move(F)), mu_(equilibrium_measure(F_, n)) {}

    const IntervalSet& domain() const { return F_; }
    const EquilibriumMeasure& measure() const { return mu_; }
    double capacity() const { return mu_.capacity; }

    Complex psi(Complex z) const {
        return Complex(pi, 0) + Complex(0, 1) * (complex_log_potential(mu_, z) - mu_.robin);
    }

    // Green function with pole at infinity; lower half-plane by reflection.
    double green(Complex z) const {
        Complex zu(z.real(), std::abs(z.imag()));
        return complex_log_potential(mu_, zu).real() - mu_.robin;
    }

    Complex big_psi(Complex z) const {
        if (z.imag() == 0 && F_.contains(z.real()))
            throw domain_error("big_psi: z lies in F");
        if (z.imag() < 0) return std::conj(big_psi(std::conj(z)));
        return std::exp(Complex(0, 1) * (Complex(pi, 0) - psi(z)));
    }

    CombData comb_data() const {
        auto gaps = F_.interior_gaps();
        if (gaps.empty())
            throw domain_error("comb_data: F has no interior gap");
        CombData cd;
        for (std::size_t j = 0; j < gaps.size(); ++j) {
            const auto& g = gaps[j];
            double tol = 1e-12 * g.length();
            double xm = detail::golden_max([&](double x) { return green(Complex(x, 0)); },
                                           g.lo, g.hi, tol);
            Complex w = psi(Complex(xm, 0));
            cd.slits.push_back({j, w.real(), w.imag()});
        }
        if (F_.contains(0.0)) cd.u0 = psi(Complex(0, 0)).real();
        return cd;
    }

private:
    IntervalSet F_;
    EquilibriumMeasure mu_;
};

inline Complex psi(const IntervalSet& F, Complex z, int n = 256) {
    return CombMap(F, n).psi(z);
}

inline double green(const IntervalSet& F, Complex z, int n = 256) {
    return CombMap(F, n).green(z);
}

inline Complex big_psi(const IntervalSet& F, Complex z, int n = 256) {
    return CombMap(F, n).big_psi(z);
}

inline CombData comb_data(const IntervalSet& F, int n = 256) {
    return CombMap(F, n).comb_data();
}

// cap(K_F) = 1 / (2 cap F): the capacity of the slit-disk image of F.
inline double cap_KF_from_capacity(double cap_F) { return 1.0 / (2.0 * cap_F); }

inline double cap_KF(const IntervalSet& F, int n = 256) {
    return cap_KF_from_capacity(capacity(F, n));
}

// Green function with a finite pole. Supported poles: infinity, a real
// point outside F, or -- through the symmetry g(z,p) = g(p,z) -- any pole
// when the evaluation point is real and outside F.
inline double green_with_pole(const IntervalSet& F, Complex z, Complex p, int n = 256) {
    if (std::isinf(p.real()) || std::isinf(p.imag())) return green(F, z, n);
    if (z == p) throw domain_error("green_with_pole: z equals the pole");
    if (p.imag() == 0.0) {
        double pr = p.real();
        if (F.contains(pr)) throw domain_error("green_with_pole: pole lies in F");
        MobiusMap M(0, 1, 1, -pr); // x -> 1/(x - p)
        std::vector<std::pair<double, double>> raw;
        for (const auto& comp : F.intervals()) {
            double a = M(comp.lo), b = M(comp.hi);
            raw.emplace_back(std::min(a, b), std::max(a, b));
        }
        IntervalSet image = IntervalSet::normalize(std::move(raw));
        return green(image, M(z), n);
    }
    if (z.imag() == 0.0 && !F.contains(z.real()))
        return green_with_pole(F, p, z, n);
    throw domain_error("green_with_pole: unsupported pole (neither real outside F nor "
                       "swappable by symmetry)");
}

// U(z,E) = int over the gaps of E within [-R,R] of g_Omega(t,z) dt.
// The pole z must be real and lie in a gap inside the truncation; the
// Green function is realized with one Moebius solve (pole to infinity)
// and evaluated along the gaps. The integral over the gap containing z
// splits off the exact logarithmic part.
inline double theoremB_integral(const GapSystem& E, double z, double R, int n = 128) {
    if (!std::isfinite(z) || E.in_set(z))
        throw domain_error("theoremB_integral: z must be real inside a gap of E");
    if (std::abs(z) >= R)
        throw domain_error("theoremB_integral: z outside the truncation radius");
    auto clipped = E.gaps_within(R);
    GapSystem ER(clipped, R);
    MobiusMap M(0, 1, 1, -z);
    CombMap comb(mobius_image(ER, M), n);
    auto g_at = [&](double t) { return comb.green(M(Complex(t, 0))); };

    std::vector<double> gx, gw;
    double total = 0;
    for (const auto& gap : clipped) {
        bool has_pole = gap.lo < z && z < gap.hi;
        auto integrand = [&](double t) {
            double val = g_at(t);
            return has_pole ? val + std::log(std::abs(t - z)) : val;
        };
        double prev = 0;
        bool converged = false;
        for (int k = 64; k <= 4096; k *= 2) {
            detail::gauss_legendre(k, gx, gw);
            double acc = 0;
            double c = 0.5 * (gap.lo + gap.hi), h = 0.5 * gap.length();
            for (int i = 0; i < k; ++i) acc += gw[i] * integrand(c + h * gx[i]);
            acc *= h;
            if (k > 64 && std::abs(acc - prev) <= 1e-6 * std::max(1.0, std::abs(acc))) {
                prev = acc;
                converged = true;
                break;
            }
            prev = acc;
        }
        if (!converged)
            throw solver_error("theoremB_integral: gap quadrature did not converge");
        if (has_pole) {
            double a = z - gap.lo, b = gap.hi - z;
            prev -= a * std::log(a) + b * std::log(b) - gap.length();
        }
        total += prev;
    }
    return total;
}

// g(iy)/y for a decreasing ladder of y values; 0 must lie in F.
inline std::vector<double> smoothness_ratio(const IntervalSet& F,
                                            const std::vector<double>& y_values,
                                            int n = 256) {
    if (!F.contains(0.0))
        throw domain_error("smoothness_ratio: 0 must lie in F");
    CombMap comb(F, n);
    std::vector<double> out;
    out.reserve(y_values.size());
    for (double y : y_values) {
        if (!(y > 1e-13 * F.diameter()))
            throw domain_error("smoothness_ratio: y below numerical resolution");
        out.push_back(comb.green(Complex(0, y)) / y);
    }
    return out;
}

// Sublevel-set regularization of a capacity-thin set (compact analog of
// the phi-plane construction): F* = {x in hull F : g(x) <= v' - 2 pi}
// where v' is the tallest slit. Requires cap(F)/cap(hull) <= e^{-3 pi}.
inline IntervalSet capacity_regularize(const IntervalSet& F, int n = 256) {
    Interval hull = F.hull();
    double cap_hull = hull.length() / 4.0;
    CombMap comb(F, n);
    if (comb.capacity() / cap_hull > std::exp(-3.0 * pi))
        throw domain_error("capacity_regularize: cap(F)/cap(hull) exceeds e^{-3 pi}");
    CombData cd = comb.comb_data();
    double vmax = 0;
    for (const auto& s : cd.slits) vmax = std::max(vmax, s.v);
    double level = vmax - 2.0 * pi;

    std::vector<std::pair<double, double>> raw;
    for (const auto& iv : F.intervals()) raw.emplace_back(iv.lo, iv.hi);
    auto gaps = F.interior_gaps();
    for (std::size_t j = 0; j < gaps.size(); ++j) {
        const auto& g = gaps[j];
        double vj = cd.slits[j].v;
        if (vj <= level) {
            raw.emplace_back(g.lo, g.hi);
            continue;
        }
        double tol = 1e-13 * g.length();
        double xm = detail::golden_max(
            [&](double x) { return comb.green(Complex(x, 0)); }, g.lo, g.hi, tol);
        auto f = [&](double x) { return comb.green(Complex(x, 0)) - level; };
        double x1 = detail::bisect(f, g.lo, xm, tol);
        double x2 = detail::bisect([&](double x) { return -f(x); }, xm, g.hi, tol);
        if (x1 > g.lo) raw.emplace_back(g.lo, x1);
        if (x2 < g.hi) raw.emplace_back(x2, g.hi);
    }
    return IntervalSet::normalize(std::move(raw));
}

} // namespace denjoy
