#pragma once

#include <cmath>
#include <limits>

#include "denjoy/common.hpp"

namespace denjoy {

// Real Moebius transformation w = (p z + q) / (r z + s), mapping the
// extended real line to itself.
struct MobiusMap {
    double p = 1, q = 0, r = 0, s = 1;

    MobiusMap() = default;
    MobiusMap(double p_, double q_, double r_, double s_) : p(p_), q(q_), r(r_), s(s_) {
        if (p * s - q * r == 0)
            throw domain_error("MobiusMap: singular coefficients");
    }

    double operator()(double x) const {
        if (std::isinf(x)) {
            if (r == 0) return x > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            return p / r;
        }
        double den = r * x + s;
        if (den == 0) return std::numeric_limits<double>::infinity();
        return (p * x + q) / den;
    }

    Complex operator()(Complex z) const { return (p * z + q) / (r * z + s); }

    MobiusMap inverse() const { return MobiusMap(s, -q, -r, p); }

    // this after other: (this o other)(x) = this(other(x))
    MobiusMap compose(const MobiusMap& other) const {
        return MobiusMap(p * other.p + q * other.r, p * other.q + q * other.s,
                         r * other.p + s * other.r, r * other.q + s * other.s);
    }
};

} // namespace denjoy
