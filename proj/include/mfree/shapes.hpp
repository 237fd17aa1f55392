#pragma once

#include <chrono>
#include <fstream>
#include <vector>

#include "mfree/rbffd.hpp"
#include "mfree/wls.hpp"

namespace mfree {

enum class Engine : std::uint8_t { WLS, RBFFD };

inline const char* engine_name(Engine e) { return e == Engine::WLS ? "WLS" : "RBFFD"; }

/// Per-node choice of shape engine.
struct EngineAssignment {
    std::vector<Engine> labels;

    int count(Engine e) const {
        int c = 0;
        for (auto l : labels) c += (l == e);
        return c;
    }
};

/// RBF-FD inside the ball of radius rs around xs, WLS outside.
template <int D>
EngineAssignment assign_engines(const NodeSet<D>& nodes, const Vec<D>& xs, double rs) {
    if (rs < 0) throw ConfigError("assignment radius must be >= 0");
    EngineAssignment out;
    out.labels.resize(nodes.size());
    for (int i = 0; i < nodes.size(); ++i)
        out.labels[i] = (nodes.positions[i] - xs).norm() < rs ? Engine::RBFFD : Engine::WLS;
    return out;
}

/// Operator weights for every node and every requested operator, with the
/// engine tag that produced them and the wall-clock time of the whole pass.
template <int D>
struct ShapeStore {
    std::vector<LinearOperator> ops;
    std::vector<Engine> tags;
    int stencil_len = 0;
    std::vector<Eigen::MatrixXd> weights;  // per op: stencil_len x N, column per node
    double t_shape_seconds = 0.0;
    int threads = 1;

    int node_count() const { return static_cast<int>(tags.size()); }

    int op_index(const LinearOperator& op) const {
        for (int i = 0; i < static_cast<int>(ops.size()); ++i)
            if (ops[i] == op) return i;
        throw ConfigError("operator " + op.name() + " not present in shape store");
    }

    /// Weight vector of one node for one operator.
    Eigen::VectorXd shape(const LinearOperator& op, int node) const {
        return weights[op_index(op)].col(node);
    }

    /// node id, operator, engine tag, weights — for regression comparison.
    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open " + path + " for writing");
        out << "node,op,engine,weights\n";
        char buf[64];
        for (int i = 0; i < node_count(); ++i) {
            for (std::size_t o = 0; o < ops.size(); ++o) {
                out << i << ',' << ops[o].name() << ',' << engine_name(tags[i]);
                for (int j = 0; j < stencil_len; ++j) {
                    std::snprintf(buf, sizeof(buf), ",%.17g", weights[o](j, i));
                    out << buf;
                }
                out << '\n';
            }
        }
    }
};

/// Dispatch every node to its assigned engine for all requested operators.
/// One local factorization per node is shared across the operators. The pass
/// is sequential so the recorded time stays comparable across engines.
template <int D>
ShapeStore<D> compute_shapes(const NodeSet<D>& nodes, const std::vector<Stencil>& stencils,
                             const std::vector<LinearOperator>& ops, const EngineAssignment& assignment,
                             const WLSConfig& wls_cfg, const RBFFDConfig& rbf_cfg) {
    const int N = nodes.size();
    if (static_cast<int>(assignment.labels.size()) != N)
        throw ConfigError("engine assignment does not cover all nodes");
    if (static_cast<int>(stencils.size()) != N) throw ConfigError("one stencil per node required");

    ShapeStore<D> store;
    store.ops = ops;
    store.tags = assignment.labels;
    store.stencil_len = stencils.empty() ? 0 : stencils[0].size();
    store.weights.assign(ops.size(), Eigen::MatrixXd::Zero(store.stencil_len, N));

    const MonomialBasis<D> wls_basis(wls_cfg.degree);
    const MonomialBasis<D> rbf_basis(rbf_cfg.degree);

    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < N; ++i) {
        if (assignment.labels[i] == Engine::WLS) {
            auto frame = local_frame(nodes, stencils[i], wls_cfg.stencil_override);
            WlsShapeSolver<D> solver(frame, wls_basis, wls_cfg, i);
            const int ne = static_cast<int>(frame.pts.size());
            for (std::size_t o = 0; o < ops.size(); ++o)
                store.weights[o].col(i).head(ne) = solver.weights(ops[o]);
        } else {
            auto frame = local_frame(nodes, stencils[i], rbf_cfg.stencil_override);
            RbffdShapeSolver<D> solver(frame, rbf_basis, rbf_cfg, i);
            const int ne = static_cast<int>(frame.pts.size());
            for (std::size_t o = 0; o < ops.size(); ++o)
                store.weights[o].col(i).head(ne) = solver.weights(ops[o]);
        }
    }
    store.t_shape_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return store;
}

}  // namespace mfree
