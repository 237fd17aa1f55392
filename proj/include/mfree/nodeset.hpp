#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mfree/geometry.hpp"

namespace mfree {

/// Scattered discretization nodes with boundary classification, outward unit
/// normals for boundary nodes (zero for interior ones) and the target spacing
/// recorded at each node. Immutable once filled; safe to share across threads.
template <int D>
struct NodeSet {
    std::vector<Vec<D>> positions;
    std::vector<std::uint8_t> boundary;
    std::vector<Vec<D>> normals;
    std::vector<double> spacing;

    int size() const { return static_cast<int>(positions.size()); }

    void add(const Vec<D>& p, double h, bool is_boundary, const Vec<D>& normal = Vec<D>::Zero()) {
        positions.push_back(p);
        boundary.push_back(is_boundary ? 1 : 0);
        normals.push_back(normal);
        spacing.push_back(h);
    }

    int count_boundary() const {
        int c = 0;
        for (auto b : boundary) c += b;
        return c;
    }

    /// One row per node: x,y[,z],boundary,nx,ny[,nz],h
    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open " + path + " for writing");
        const char* coords2 = "x,y,boundary,nx,ny,h\n";
        const char* coords3 = "x,y,z,boundary,nx,ny,nz,h\n";
        out << (D == 2 ? coords2 : coords3);
        char buf[64];
        for (int i = 0; i < size(); ++i) {
            for (int a = 0; a < D; ++a) {
                std::snprintf(buf, sizeof(buf), "%.17g,", positions[i][a]);
                out << buf;
            }
            out << int(boundary[i]) << ',';
            for (int a = 0; a < D; ++a) {
                std::snprintf(buf, sizeof(buf), "%.17g,", normals[i][a]);
                out << buf;
            }
            std::snprintf(buf, sizeof(buf), "%.17g\n", spacing[i]);
            out << buf;
        }
    }
};

}  // namespace mfree
