#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <vector>

#include "mfree/geometry.hpp"
#include "mfree/hashgrid.hpp"
#include "mfree/nodeset.hpp"

namespace mfree {

/// Tunables for the advancing-front fill.
struct FillParams {
    double accept_factor = 0.9;           // candidate rejected if a node lies within accept_factor * h
    double boundary_accept_factor = 0.7;  // same check while discretizing box faces
    int candidates_2d = 15;
    int candidates_3d = 30;
};

namespace detail {

// Knots from a to b inclusive, locally spaced by step_at; the closing
// interval absorbs the remainder and stays within (0.55, 1.55) steps.
inline std::vector<double> march_axis(double a, double b, const std::function<double(double)>& step_at) {
    std::vector<double> ts{a};
    double t = a;
    while (true) {
        double s = step_at(t);
        if (!(s > 0)) throw ConfigError("spacing function must be positive");
        if (t + 1.55 * s >= b) break;
        t += s;
        ts.push_back(t);
    }
    ts.push_back(b);
    return ts;
}

}  // namespace detail

/// Nodes along the circle boundary, arc spacing ~ h, radial outward normals.
inline NodeSet<2> fill_boundary(const Disc& domain, const SpacingFunction<2>& sf, std::uint64_t /*seed*/ = 0) {
    NodeSet<2> out;
    auto point_at = [&](double theta) {
        return Vec2(domain.center + domain.radius * Vec2(std::cos(theta), std::sin(theta)));
    };
    if (sf(point_at(0.0)) > domain.diameter())
        throw ConfigError("spacing exceeds domain diameter; no boundary node placement possible");
    double theta = 0.0;
    while (true) {
        Vec2 p = point_at(theta);
        Vec2 normal = (p - domain.center).normalized();
        out.add(p, sf(p), true, normal);
        double dtheta = sf(p) / domain.radius;
        if (theta + 1.55 * dtheta >= 2 * M_PI) break;
        theta += dtheta;
    }
    return out;
}

/// Face-by-face marching grid over the six box faces; edge and corner
/// duplicates are removed by a proximity check.
inline NodeSet<3> fill_boundary(const Box3& domain, const SpacingFunction<3>& sf, std::uint64_t /*seed*/ = 0,
                                const FillParams& params = {}) {
    if (sf(domain.lo) > domain.diameter())
        throw ConfigError("spacing exceeds domain diameter; no boundary node placement possible");
    NodeSet<3> out;
    HashGrid<3> grid(sf.fine);
    for (int f = 0; f < 3; ++f) {
        for (int side = 0; side < 2; ++side) {
            const int u = (f + 1) % 3, v = (f + 2) % 3;
            const double fixed = side ? domain.hi[f] : domain.lo[f];
            Vec3 normal = Vec3::Zero();
            normal[f] = side ? 1.0 : -1.0;
            auto point_at = [&](double uu, double vv) {
                Vec3 p;
                p[f] = fixed;
                p[u] = uu;
                p[v] = vv;
                return p;
            };
            // Row spacing follows the tightest h along the row, so graded
            // regions are covered; the proximity check prunes the excess.
            const double u_ref = std::clamp(sf.refine_center[u], domain.lo[u], domain.hi[u]);
            auto vknots = detail::march_axis(domain.lo[v], domain.hi[v],
                                             [&](double vv) { return sf(point_at(u_ref, vv)); });
            for (double vv : vknots) {
                auto uknots = detail::march_axis(domain.lo[u], domain.hi[u],
                                                 [&](double uu) { return sf(point_at(uu, vv)); });
                for (double uu : uknots) {
                    Vec3 p = point_at(uu, vv);
                    double h = sf(p);
                    if (grid.has_neighbor_within(p, params.boundary_accept_factor * h)) continue;
                    grid.insert(p);
                    out.add(p, h, true, normal);
                }
            }
        }
    }
    return out;
}

namespace detail {

template <int D>
Vec<D> random_direction(std::mt19937_64& rng) {
    if constexpr (D == 2) {
        std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
        double t = angle(rng);
        return Vec2(std::cos(t), std::sin(t));
    } else {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec<D> dir;
        do {
            for (int a = 0; a < D; ++a) dir[a] = gauss(rng);
        } while (dir.norm() < 1e-8);
        return dir.normalized();
    }
}

}  // namespace detail

/// Advancing-front interior fill: expand from a queue of accepted nodes,
/// proposing candidates at distance h(node) in random directions and keeping
/// those inside the domain with no accepted node within accept_factor * h.
/// Deterministic for a fixed seed. Boundary nodes seed the front.
template <class DomainT, int D = DomainT::dim>
NodeSet<D> fill_interior(const DomainT& domain, const SpacingFunction<D>& sf, NodeSet<D> nodes,
                         std::uint64_t seed, const FillParams& params = {}) {
    std::mt19937_64 rng(seed);
    const int candidates = (D == 2) ? params.candidates_2d : params.candidates_3d;

    HashGrid<D> grid(sf.fine);
    std::deque<int> front;
    for (int i = 0; i < nodes.size(); ++i) {
        grid.insert(nodes.positions[i]);
        front.push_back(i);
    }

    while (!front.empty()) {
        const Vec<D> x = nodes.positions[front.front()];
        front.pop_front();
        const double h = sf(x);
        for (int c = 0; c < candidates; ++c) {
            Vec<D> cand = x + h * detail::random_direction<D>(rng);
            if (!domain.contains(cand)) continue;
            double hc = sf(cand);
            if (grid.has_neighbor_within(cand, params.accept_factor * hc)) continue;
            grid.insert(cand);
            nodes.add(cand, hc, false);
            front.push_back(nodes.size() - 1);
        }
    }
    return nodes;
}

/// Boundary and interior fill in one call.
template <class DomainT, int D = DomainT::dim>
NodeSet<D> discretize(const DomainT& domain, const SpacingFunction<D>& sf, std::uint64_t seed,
                      const FillParams& params = {}) {
    return fill_interior(domain, sf, fill_boundary(domain, sf, seed), seed, params);
}

}  // namespace mfree
