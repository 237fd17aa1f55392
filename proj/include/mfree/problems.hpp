#pragma once

#include <cmath>

#include "mfree/geometry.hpp"

namespace mfree {

/// 2D Dirichlet Poisson benchmark with an exponentially strong source:
/// the exact solution u(x) = exp(-alpha ||x - source||^2) doubles as the
/// boundary datum, and its Laplacian is known in closed form.
struct PoissonProblem {
    double alpha = 1e3;
    Vec2 source{0.5, 0.5};

    double u(const Vec2& x) const {
        return std::exp(-alpha * (x - source).squaredNorm());
    }

    double f_lap(const Vec2& x) const {
        const double r2 = (x - source).squaredNorm();
        return 4.0 * (alpha * alpha * r2 - alpha) * std::exp(-alpha * r2);
    }
};

/// Concentrated normal point load on an isotropic elastic half-space. The
/// closed-form displacement field solves the homogeneous Cauchy-Navier
/// equations away from the load point and supplies Dirichlet data on the box
/// benchmark domain.
///
/// Note: the far-field term of u_z decays as 1/||x|| (verified against the
/// Cauchy-Navier operator by finite differences in the test suite).
struct BoussinesqProblem {
    double youngs = 1.0;
    double poisson_ratio = 0.33;
    double load = 1.0;  // magnitude, acting along -e_z

    double lame_lambda() const {
        return youngs * poisson_ratio / ((1 + poisson_ratio) * (1 - 2 * poisson_ratio));
    }
    double lame_mu() const { return youngs / (2 * (1 + poisson_ratio)); }

    Vec3 displacement(const Vec3& x) const {
        const double r = x.norm();
        const double mu = lame_mu();
        const double scale = load / (4 * M_PI * mu);
        const double z = x[2];
        const double radial = z / (r * r * r) - (1 - 2 * poisson_ratio) / (r * (r + z));
        Vec3 u;
        u[0] = x[0] * scale * radial;
        u[1] = x[1] * scale * radial;
        u[2] = scale * (z * z / (r * r * r) + 2 * (1 - poisson_ratio) / r);
        return u;
    }
};

}  // namespace mfree
