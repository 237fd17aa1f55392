#pragma once

#include <vector>

#include "mfree/nodeset.hpp"
#include "mfree/stencil.hpp"

namespace mfree {

/// Stencil coordinates shifted by the center node and divided by the stencil
/// radius. All shape systems are formed in this frame; computed weights are
/// rescaled by radius^-order afterwards. Keeps the monomial and PHS matrices
/// well conditioned at high approximation orders.
template <int D>
struct LocalFrame {
    std::vector<Vec<D>> pts;  // pts[0] is the origin
    double radius = 1.0;
};

template <int D>
LocalFrame<D> local_frame(const NodeSet<D>& nodes, const Stencil& stencil, int take = 0) {
    const int n = (take > 0 && take < stencil.size()) ? take : stencil.size();
    LocalFrame<D> frame;
    frame.pts.resize(n);
    const Vec<D>& center = nodes.positions[stencil.center];
    for (int j = 0; j < n; ++j) frame.pts[j] = nodes.positions[stencil.neighbors[j]] - center;
    frame.radius = frame.pts.back().norm();
    if (frame.radius <= 0.0) frame.radius = 1.0;
    for (auto& p : frame.pts) p /= frame.radius;
    return frame;
}

}  // namespace mfree
