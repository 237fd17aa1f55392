#pragma once

#include <cmath>

#include "mfree/geometry.hpp"
#include "mfree/operators.hpp"

namespace mfree {

/// Polyharmonic spline radial function: r^k for odd k, r^k log r for even k.
/// phi(0) = 0 in both cases. Shape-parameter free.
inline double phs_eval(int k, double r) {
    if (k < 1) throw ConfigError("PHS order must be >= 1");
    if (r == 0.0) return 0.0;
    double v = std::pow(r, k);
    return (k % 2 == 0) ? v * std::log(r) : v;
}

namespace detail {

// phi'(r)/r and the coefficient of the rank-one term in the Hessian,
// so that  d2 phi / dx_a dx_b = g1 delta_ab + g2 (x-c)_a (x-c)_b.
inline double phs_g1(int k, double r) {
    if (k % 2 == 1) return k * std::pow(r, k - 2);
    return std::pow(r, k - 2) * (k * std::log(r) + 1.0);
}

inline double phs_g2(int k, double r) {
    if (k % 2 == 1) return k * (k - 2) * std::pow(r, k - 4);
    return std::pow(r, k - 4) * ((k - 2) * (k * std::log(r) + 1.0) + k);
}

}  // namespace detail

/// (L phi(||x - c||))(x = 0) for a PHS of order k centered at offset c,
/// in d = D dimensions. At r = 0 the limit value 0 is returned (valid for
/// the k >= 3 orders used here).
template <int D>
double phs_apply_at_origin(const LinearOperator& op, int k, const Vec<D>& c) {
    if (k < 1) throw ConfigError("PHS order must be >= 1");
    const double r = c.norm();
    using Kind = LinearOperator::Kind;
    if (op.kind == Kind::Identity) return phs_eval(k, r);
    if (r == 0.0) return 0.0;
    switch (op.kind) {
        case Kind::Partial:
            // gradient at 0 is g1 * (0 - c)
            return -detail::phs_g1(k, r) * c[op.a];
        case Kind::SecondPartial: {
            double v = detail::phs_g2(k, r) * c[op.a] * c[op.b];
            if (op.a == op.b) v += detail::phs_g1(k, r);
            return v;
        }
        case Kind::Laplacian:
            if (k % 2 == 1) return k * (k + D - 2) * std::pow(r, k - 2);
            return std::pow(r, k - 2) * (k * (k + D - 2) * std::log(r) + 2 * k + D - 2);
        default: return 0.0;
    }
}

}  // namespace mfree
