#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mfree/local_frame.hpp"
#include "mfree/monomials.hpp"
#include "mfree/phs.hpp"

namespace mfree {

struct RBFFDConfig {
    int phs_order = 5;
    int degree = 2;  // monomial augmentation degree
    // Permits a singular augmented matrix (e.g. rank-deficient P on special
    // grid stencils); falls back to a minimum-norm solve.
    bool allow_rank_deficient = false;
    int stencil_override = 0;

    RBFFDConfig() = default;
    RBFFDConfig(int k, int m) : phs_order(k), degree(m) {}
};

/// PHS RBF shape engine with monomial exactness constraints. Per stencil the
/// augmented saddle system
///   [ Phi  P ] [ w      ]   [ l_phi ]
///   [ P^T  0 ] [ lambda ] = [ l_p   ]
/// is factorized once (dense LU with partial pivoting) and solved for every
/// requested operator; the Lagrange multipliers are discarded.
template <int D>
class RbffdShapeSolver {
public:
    RbffdShapeSolver(const LocalFrame<D>& frame, const MonomialBasis<D>& basis, const RBFFDConfig& cfg,
                     int node_id = -1)
        : frame_(frame), basis_(basis), cfg_(cfg) {
        const int n = static_cast<int>(frame.pts.size());
        const int s = basis.size();
        if (n < s && !cfg.allow_rank_deficient)
            throw ConfigError("RBF-FD stencil size " + std::to_string(n) + " below basis size " +
                              std::to_string(s));

        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + s, n + s);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = phs_eval(cfg.phs_order, (frame.pts[i] - frame.pts[j]).norm());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < s; ++j) {
                double p = eval_monomial<D>(basis.exponents[j], frame.pts[i]);
                a(i, n + j) = p;
                a(n + j, i) = p;
            }
        }

        lu_.compute(a);
        double rc = lu_.rcond();
        if (!(rc > kSingularRcond)) {
            if (!cfg.allow_rank_deficient)
                throw DegenerateStencil(node_id, "singular augmented system");
            cod_.setThreshold(1e-12);
            cod_.compute(a);
            use_cod_ = true;
        }
    }

    Eigen::VectorXd weights(const LinearOperator& op) const {
        const int n = static_cast<int>(frame_.pts.size());
        const int s = basis_.size();
        Eigen::VectorXd rhs(n + s);
        for (int i = 0; i < n; ++i)
            rhs[i] = phs_apply_at_origin<D>(op, cfg_.phs_order, frame_.pts[i]);
        for (int j = 0; j < s; ++j)
            rhs[n + j] = apply_operator_to_monomial<D>(op, basis_.exponents[j]);
        Eigen::VectorXd sol = use_cod_ ? cod_.solve(rhs).eval() : lu_.solve(rhs).eval();
        return sol.head(n) * std::pow(frame_.radius, -op.order());
    }

private:
    static constexpr double kSingularRcond = 1e-14;

    LocalFrame<D> frame_;
    const MonomialBasis<D>& basis_;
    RBFFDConfig cfg_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
    bool use_cod_ = false;
};

/// One-shot form.
template <int D>
Eigen::VectorXd rbffd_weights(const Stencil& stencil, const NodeSet<D>& nodes, const LinearOperator& op,
                              const RBFFDConfig& cfg) {
    MonomialBasis<D> basis(cfg.degree);
    RbffdShapeSolver<D> solver(local_frame(nodes, stencil, cfg.stencil_override), basis, cfg,
                               stencil.center);
    return solver.weights(op);
}

}  // namespace mfree
