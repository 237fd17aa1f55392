#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "mfree/errors.hpp"

namespace mfree {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

using Vec1 = Vec<1>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

/// Circular domain in the plane.
struct Disc {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;

    static constexpr int dim = 2;

    Disc() = default;
    Disc(const Vec2& c, double r) : center(c), radius(r) {
        if (radius <= 0) throw ConfigError("disc radius must be positive");
    }

    bool contains(const Vec2& p) const { return (p - center).norm() < radius; }
    double diameter() const { return 2 * radius; }
};

/// Axis-aligned box in three dimensions.
struct Box3 {
    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 hi{1.0, 1.0, 1.0};

    static constexpr int dim = 3;

    Box3() = default;
    Box3(const Vec3& lo_, const Vec3& hi_) : lo(lo_), hi(hi_) {
        for (int a = 0; a < 3; ++a)
            if (!(lo[a] < hi[a])) throw ConfigError("box must satisfy lo < hi componentwise");
    }

    bool contains(const Vec3& p) const {
        for (int a = 0; a < 3; ++a)
            if (p[a] <= lo[a] || p[a] >= hi[a]) return false;
        return true;
    }
    double diameter() const { return (hi - lo).norm(); }
};

/// Radially graded target spacing: fine near `refine_center`, growing as
/// fine + (coarse - fine) * r^exponent and capped at `coarse`.
///
/// If `refine_axis` is set to a nonzero direction the grading distance is
/// measured to the line through `refine_center` along that axis instead of
/// to the point, refining a whole band (e.g. around a solution's singular
/// ray) rather than a ball.
template <int D>
struct SpacingFunction {
    double fine = 0.02;
    double coarse = 0.1;
    Vec<D> refine_center = Vec<D>::Zero();
    double exponent = 1.5;
    Vec<D> refine_axis = Vec<D>::Zero();

    SpacingFunction() = default;
    SpacingFunction(double fine_, double coarse_, const Vec<D>& center, double exponent_ = 1.5)
        : fine(fine_), coarse(coarse_), refine_center(center), exponent(exponent_) {
        if (!(fine > 0) || fine > coarse) throw ConfigError("spacing requires 0 < fine <= coarse");
    }

    static SpacingFunction constant(double h) { return SpacingFunction(h, h, Vec<D>::Zero()); }

    double operator()(const Vec<D>& x) const {
        Vec<D> d = x - refine_center;
        if (refine_axis.squaredNorm() > 0) {
            const Vec<D> a = refine_axis.normalized();
            d -= d.dot(a) * a;
        }
        const double r = d.norm();
        return std::min(fine + (coarse - fine) * std::pow(r, exponent), coarse);
    }
};

template <int D>
double eval_spacing(const SpacingFunction<D>& sf, const Vec<D>& x) {
    return sf(x);
}

}  // namespace mfree
