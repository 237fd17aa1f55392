#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "mfree/geometry.hpp"
#include "mfree/nodeset.hpp"

namespace mfree {

/// Exact k-nearest-neighbor search over a fixed point set. Ties at equal
/// distance are broken by ascending point index so queries are deterministic.
/// The tree is immutable after construction; queries are read-only.
template <int D>
class KdTree {
public:
    explicit KdTree(const std::vector<Vec<D>>& points) : pts_(points) {
        if (pts_.empty()) throw ConfigError("kd-tree requires a nonempty point set");
        perm_.resize(pts_.size());
        for (int i = 0; i < static_cast<int>(pts_.size()); ++i) perm_[i] = i;
        nodes_.reserve(2 * pts_.size() / kLeafSize + 2);
        root_ = build(0, static_cast<int>(pts_.size()), 0);
    }

    /// Indices of the k nearest points to q, sorted by (distance, index).
    std::vector<int> knn(const Vec<D>& q, int k) const {
        if (k < 1 || k > static_cast<int>(pts_.size()))
            throw ConfigError("knn: k must be in [1, N]");
        Heap heap;
        search(root_, q, k, heap);
        std::vector<std::pair<double, int>> found;
        found.reserve(k);
        while (!heap.empty()) {
            found.push_back(heap.top());
            heap.pop();
        }
        std::sort(found.begin(), found.end());
        std::vector<int> out(k);
        for (int i = 0; i < k; ++i) out[i] = found[i].second;
        return out;
    }

    int size() const { return static_cast<int>(pts_.size()); }

private:
    static constexpr int kLeafSize = 16;
    // max-heap: worst candidate (largest distance, then largest index) on top
    using Heap = std::priority_queue<std::pair<double, int>>;

    struct Node {
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        int begin = 0, end = 0;  // leaf range in perm_
        int left = -1, right = -1;
    };

    int build(int begin, int end, int depth) {
        Node node;
        if (end - begin <= kLeafSize) {
            node.axis = -1;
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        const int axis = depth % D;
        const int mid = (begin + end) / 2;
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                         [&](int a, int b) {
                             return pts_[a][axis] != pts_[b][axis] ? pts_[a][axis] < pts_[b][axis]
                                                                   : a < b;
                         });
        node.axis = axis;
        node.split = pts_[perm_[mid]][axis];
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid, depth + 1);
        const int right = build(mid, end, depth + 1);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void consider(const Vec<D>& q, int idx, int k, Heap& heap) const {
        double d2 = (pts_[idx] - q).squaredNorm();
        if (static_cast<int>(heap.size()) < k) {
            heap.emplace(d2, idx);
        } else if (std::make_pair(d2, idx) < heap.top()) {
            heap.pop();
            heap.emplace(d2, idx);
        }
    }

    void search(int ni, const Vec<D>& q, int k, Heap& heap) const {
        const Node& node = nodes_[ni];
        if (node.axis < 0) {
            for (int i = node.begin; i < node.end; ++i) consider(q, perm_[i], k, heap);
            return;
        }
        const double delta = q[node.axis] - node.split;
        const int near = delta < 0 ? node.left : node.right;
        const int far = delta < 0 ? node.right : node.left;
        search(near, q, k, heap);
        if (static_cast<int>(heap.size()) < k || delta * delta <= heap.top().first)
            search(far, q, k, heap);
    }

    std::vector<Vec<D>> pts_;
    std::vector<int> perm_;
    std::vector<Node> nodes_;
    int root_ = 0;
};

template <int D>
KdTree<D> build_index(const NodeSet<D>& nodes) {
    return KdTree<D>(nodes.positions);
}

}  // namespace mfree
