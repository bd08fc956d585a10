#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/interval_set.hpp"

namespace denjoy {

// Discretized equilibrium measure of an interval union F.
//
// On each component [a,b] the density is represented against the arcsine
// weight: dmu = sum_p alpha_p T_p(t) / (pi sqrt(1-t^2)) dt with
// t = (x-c)/r. Collocating the potential at the Chebyshev nodes of each
// component gives a square spectral system; the diagonal blocks use the
// closed-form Chebyshev log transforms, cross blocks use Gauss-Chebyshev
// quadrature. Potentials are evaluated from the coefficients, which stays
// accurate on and arbitrarily close to the support.
struct EquilibriumMeasure {
    std::vector<Interval> support;
    std::vector<std::vector<double>> coeff; // coeff[l][p], p < nodes_per_component
    std::vector<double> nodes;              // flattened Chebyshev nodes
    std::vector<double> weights;            // effective node weights, sum = 1
    double robin = 0;                       // log cap(F)
    double capacity = 0;
    int nodes_per_component = 0;

    double total_mass() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
};

namespace detail {

inline void check_components(const IntervalSet& F) {
    double diam = F.diameter();
    const auto& iv = F.intervals();
    for (std::size_t i = 0; i + 1 < iv.size(); ++i)
        if (iv[i + 1].lo - iv[i].hi < 1e-6 * diam)
            throw domain_error("equilibrium_measure: components closer than 1e-6 of the diameter");
}

} // namespace detail

inline EquilibriumMeasure equilibrium_measure(const IntervalSet& F, int n = 256) {
    if (F.empty()) throw domain_error("equilibrium_measure: empty set");
    if (n < 8) throw domain_error("equilibrium_measure: need n >= 8 nodes per component");
    detail::check_components(F);

    const auto& comps = F.intervals();
    const int m = static_cast<int>(comps.size());
    const int N = m * n + 1;

    std::vector<double> theta(n), c(m), r(m);
    for (int i = 0; i < n; ++i) theta[i] = (2 * i + 1) * pi / (2 * n);
    for (int l = 0; l < m; ++l) {
        c[l] = 0.5 * (comps[l].lo + comps[l].hi);
        r[l] = 0.5 * (comps[l].hi - comps[l].lo);
    }

    Eigen::MatrixXd C(n, n); // C(j,p) = cos(p theta_j)
    for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p) C(j, p) = std::cos(p * theta[j]);

    std::vector<Eigen::VectorXd> node(m);
    for (int l = 0; l < m; ++l) {
        node[l].resize(n);
        for (int j = 0; j < n; ++j) node[l][j] = c[l] + r[l] * std::cos(theta[j]);
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);

    Eigen::MatrixXd LG(n, n);
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
            auto block = A.block(k * n, l * n, n, n);
            if (l == k) {
                for (int i = 0; i < n; ++i) {
                    block(i, 0) = std::log(r[k] / 2.0);
                    for (int p = 1; p < n; ++p) block(i, p) = -C(i, p) / p;
                }
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        LG(i, j) = std::log(std::abs(node[k][i] - node[l][j]));
                block = LG * C / static_cast<double>(n);
            }
        }
        A.block(k * n, N - 1, n, 1).setConstant(-1.0);
    }
    for (int l = 0; l < m; ++l) A(N - 1, l * n) = 1.0;
    rhs[N - 1] = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd sol = lu.solve(rhs);
    double resid = (A * sol - rhs).norm() / rhs.norm();
    if (!std::isfinite(resid) || resid > 1e-8)
        throw solver_error("equilibrium_measure: collocation system is numerically singular");

    EquilibriumMeasure mu;
    mu.support = comps;
    mu.nodes_per_component = n;
    mu.robin = sol[N - 1];
    mu.capacity = std::exp(mu.robin);
    mu.coeff.resize(m);
    mu.nodes.resize(static_cast<std::size_t>(m) * n);
    mu.weights.resize(static_cast<std::size_t>(m) * n);
    for (int l = 0; l < m; ++l) {
        mu.coeff[l].assign(sol.data() + l * n, sol.data() + (l + 1) * n);
        Eigen::VectorXd g = C * sol.segment(l * n, n) / static_cast<double>(n);
        for (int j = 0; j < n; ++j) {
            mu.nodes[l * n + j] = node[l][j];
            mu.weights[l * n + j] = g[j];
        }
    }
    return mu;
}

inline double capacity(const IntervalSet& F, int n = 256) {
    return equilibrium_measure(F, n).capacity;
}

namespace detail {

// int log(z - zeta) dmu_l(zeta) for one component, principal branch;
// arg(z - zeta) lies in [0, pi] for Im z >= 0.
inline Complex component_log_potential(const Interval& comp,
                                       const std::vector<double>& alpha, Complex z) {
    double c = 0.5 * (comp.lo + comp.hi), r = 0.5 * (comp.hi - comp.lo);
    Complex s = (z - c) / r;
    Complex J = s + std::sqrt(s - 1.0) * std::sqrt(s + 1.0);
    Complex acc = alpha[0] * (std::log(r) + std::log(J / 2.0));
    Complex Jinv = 1.0 / J, Jp = Jinv;
    for (std::size_t p = 1; p < alpha.size(); ++p) {
        acc -= alpha[p] / static_cast<double>(p) * Jp;
        Jp *= Jinv;
    }
    return acc;
}

} // namespace detail

// int log(z - zeta) dmu(zeta), Im z >= 0 (small negative imaginary parts
// from rounding are clamped onto the upper boundary).
inline Complex complex_log_potential(const EquilibriumMeasure& mu, Complex z) {
    if (z.imag() < 0) {
        if (z.imag() < -1e-12 * (1.0 + std::abs(z)))
            throw domain_error("complex_log_potential: z must lie in the closed upper half-plane");
        z = Complex(z.real(), 0.0);
    }
    Complex acc = 0;
    for (std::size_t l = 0; l < mu.support.size(); ++l)
        acc += detail::component_log_potential(mu.support[l], mu.coeff[l], z);
    return acc;
}

// U(z) = int log|z - zeta| dmu(zeta). Defined for any complex z by the
// reflection symmetry of the measure.
inline double potential(const EquilibriumMeasure& mu, Complex z) {
    for (double nd : mu.nodes)
        if (z.real() == nd && z.imag() == 0.0)
            throw domain_error("potential: evaluation at a quadrature node");
    Complex zu(z.real(), std::abs(z.imag()));
    return complex_log_potential(mu, zu).real();
}

} // namespace denjoy
