#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mfree/geometry.hpp"

namespace mfree {

/// Uniform background grid used to reject candidate nodes that fall too close
/// to already accepted ones. Cell size should be on the order of the finest
/// spacing; queries scan the cells overlapping the search ball.
template <int D>
class HashGrid {
public:
    explicit HashGrid(double cell_size) : cell_(cell_size) {}

    void insert(const Vec<D>& p) {
        cells_[key(cell_of(p))].push_back(static_cast<int>(points_.size()));
        points_.push_back(p);
    }

    bool has_neighbor_within(const Vec<D>& p, double r) const {
        const double r2 = r * r;
        std::array<int, D> lo, hi;
        for (int a = 0; a < D; ++a) {
            lo[a] = static_cast<int>(std::floor((p[a] - r) / cell_));
            hi[a] = static_cast<int>(std::floor((p[a] + r) / cell_));
        }
        std::array<int, D> c = lo;
        while (true) {
            auto it = cells_.find(key(c));
            if (it != cells_.end()) {
                for (int idx : it->second)
                    if ((points_[idx] - p).squaredNorm() < r2) return true;
            }
            int a = 0;
            for (; a < D; ++a) {
                if (++c[a] <= hi[a]) break;
                c[a] = lo[a];
            }
            if (a == D) break;
        }
        return false;
    }

    int size() const { return static_cast<int>(points_.size()); }

private:
    std::array<int, D> cell_of(const Vec<D>& p) const {
        std::array<int, D> c;
        for (int a = 0; a < D; ++a) c[a] = static_cast<int>(std::floor(p[a] / cell_));
        return c;
    }

    static std::uint64_t key(const std::array<int, D>& c) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (int a = 0; a < D; ++a) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c[a]));
            h *= 0x100000001b3ull;
        }
        return h;
    }

    double cell_;
    std::vector<Vec<D>> points_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace mfree
