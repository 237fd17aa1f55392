#pragma once

#include <Eigen/Sparse>
#include <cstdio>
#include <fstream>

#include "mfree/shapes.hpp"

namespace mfree {

/// Global collocation system. Unknowns are node-major: the row and column of
/// node i, field component a is i * fields + a.
struct SparseSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    int fields = 1;
};

/// Scalar Poisson collocation: interior rows carry the Laplacian stencil
/// weights, boundary rows pin the value to the Dirichlet datum.
template <int D, class FLap, class G>
SparseSystem assemble_poisson(const NodeSet<D>& nodes, const std::vector<Stencil>& stencils,
                              const ShapeStore<D>& shapes, FLap f_lap, G g) {
    const int N = nodes.size();
    const int lap = shapes.op_index(LinearOperator::laplacian());
    if (shapes.node_count() != N) throw ConfigError("shape store does not cover all nodes");

    SparseSystem sys;
    sys.fields = 1;
    sys.rhs.resize(N);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * shapes.stencil_len);
    for (int i = 0; i < N; ++i) {
        if (nodes.boundary[i]) {
            trip.emplace_back(i, i, 1.0);
            sys.rhs[i] = g(nodes.positions[i]);
        } else {
            const auto w = shapes.weights[lap].col(i);
            for (int j = 0; j < stencils[i].size(); ++j)
                trip.emplace_back(i, stencils[i].neighbors[j], w[j]);
            sys.rhs[i] = f_lap(nodes.positions[i]);
        }
    }
    sys.matrix.resize(N, N);
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

/// Vector elasticity collocation of (lambda + mu) grad(div u) + mu lap u = f
/// with Dirichlet displacement data on the boundary. Requires Laplacian and
/// all second-partial shapes.
template <int D, class Body, class G>
SparseSystem assemble_cauchy_navier(const NodeSet<D>& nodes, const std::vector<Stencil>& stencils,
                                    const ShapeStore<D>& shapes, double lambda, double mu, Body body,
                                    G g) {
    if (!(mu > 0)) throw ConfigError("shear modulus must be positive");
    const int N = nodes.size();
    if (shapes.node_count() != N) throw ConfigError("shape store does not cover all nodes");
    const int lap = shapes.op_index(LinearOperator::laplacian());
    int second[D][D];
    for (int a = 0; a < D; ++a)
        for (int b = a; b < D; ++b) second[a][b] = second[b][a] = shapes.op_index(LinearOperator::second_partial(a, b));

    SparseSystem sys;
    sys.fields = D;
    sys.rhs.resize(N * D);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * D * (D + 1) * shapes.stencil_len);
    for (int i = 0; i < N; ++i) {
        if (nodes.boundary[i]) {
            const Vec<D> u = g(nodes.positions[i]);
            for (int a = 0; a < D; ++a) {
                trip.emplace_back(i * D + a, i * D + a, 1.0);
                sys.rhs[i * D + a] = u[a];
            }
        } else {
            const auto wlap = shapes.weights[lap].col(i);
            const Vec<D> f = body(nodes.positions[i]);
            for (int a = 0; a < D; ++a) {
                const int row = i * D + a;
                for (int j = 0; j < stencils[i].size(); ++j) {
                    const int col = stencils[i].neighbors[j] * D;
                    trip.emplace_back(row, col + a, mu * wlap[j]);
                    for (int b = 0; b < D; ++b)
                        trip.emplace_back(row, col + b,
                                          (lambda + mu) * shapes.weights[second[a][b]](j, i));
                }
                sys.rhs[row] = f[a];
            }
        }
    }
    sys.matrix.resize(N * D, N * D);
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

/// MatrixMarket coordinate export for external validation.
inline void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    char buf[64];
    for (int k = 0; k < m.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                          static_cast<long long>(it.row() + 1), static_cast<long long>(it.col() + 1),
                          it.value());
            out << buf;
        }
    }
}

}  // namespace mfree
