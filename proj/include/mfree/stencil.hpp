#pragma once

#include <optional>
#include <vector>

#include "mfree/kdtree.hpp"
#include "mfree/nodeset.hpp"

namespace mfree {

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Stencil size rule for a stable augmented approximation of degree m in
/// dimension d: twice the monomial basis size.
inline int stencil_size(int m, int d) {
    if (m < 0 || d < 1) throw ConfigError("stencil_size requires m >= 0, d >= 1");
    return static_cast<int>(2 * binomial(m + d, d));
}

/// Nearest-neighbor support of one node. neighbors[0] is the center itself
/// and distances from the center are non-decreasing along the list.
struct Stencil {
    int center = -1;
    std::vector<int> neighbors;
    double radius = 0.0;  // distance to the farthest member

    int size() const { return static_cast<int>(neighbors.size()); }
};

/// One stencil of the n closest nodes per node, exact search with ties broken
/// by ascending node index.
template <int D>
std::vector<Stencil> find_stencils(const NodeSet<D>& nodes, int n, const KdTree<D>* index = nullptr) {
    const int N = nodes.size();
    if (n < 1 || n > N) throw ConfigError("stencil size exceeds node count: insufficient discretization");
    std::optional<KdTree<D>> local;
    if (!index) local.emplace(build_index(nodes));
    const KdTree<D>& tree = index ? *index : *local;

    std::vector<Stencil> out(N);
    for (int i = 0; i < N; ++i) {
        Stencil& st = out[i];
        st.center = i;
        st.neighbors = tree.knn(nodes.positions[i], n);
        // the center is at distance zero; put it first regardless of index ties
        for (int j = 0; j < n; ++j) {
            if (st.neighbors[j] == i) {
                std::rotate(st.neighbors.begin(), st.neighbors.begin() + j, st.neighbors.begin() + j + 1);
                break;
            }
        }
        st.radius = (nodes.positions[st.neighbors.back()] - nodes.positions[i]).norm();
    }
    return out;
}

}  // namespace mfree
