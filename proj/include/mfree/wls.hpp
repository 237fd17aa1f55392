#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "mfree/local_frame.hpp"
#include "mfree/monomials.hpp"

namespace mfree {

enum class LeastSquaresSolve { SVD, QR };

struct WLSConfig {
    int degree = 2;
    // Gaussian stencil weighting, sigma in units of the closest-neighbor
    // distance. Localized weights are essential for the stability of the
    // global collocation operator: near-uniform weighting (sigma well above
    // the stencil radius) produces spurious modes and non-convergent solves.
    bool gaussian_weight = true;
    double sigma = 1.0;
    LeastSquaresSolve solve = LeastSquaresSolve::SVD;
    // Permits rank-deficient (or n < s) stencils; the minimum-norm solution
    // is returned and reproduction holds only if the system is consistent.
    bool allow_rank_deficient = false;
    int stencil_override = 0;  // use only the closest k stencil nodes (0 = all)

    WLSConfig() = default;
    WLSConfig(int m) : degree(m) {}
};

/// Weighted-least-squares shape engine for one stencil. The monomial fit
///   P^T W P psi = l_p,   w = W P psi
/// is solved through the minimum-norm system B^T y = l_p with B = sqrt(W) P,
/// so one factorization of B^T serves every requested operator.
template <int D>
class WlsShapeSolver {
public:
    WlsShapeSolver(const LocalFrame<D>& frame, const MonomialBasis<D>& basis, const WLSConfig& cfg,
                   int node_id = -1)
        : frame_(frame), basis_(basis), cfg_(cfg) {
        const int n = static_cast<int>(frame.pts.size());
        const int s = basis.size();
        if (n < s && !cfg.allow_rank_deficient)
            throw ConfigError("WLS stencil size " + std::to_string(n) + " below basis size " +
                              std::to_string(s));

        sqrt_w_ = Eigen::VectorXd::Ones(n);
        if (cfg.gaussian_weight) {
            if (!(cfg.sigma > 0)) throw ConfigError("Gaussian weight requires sigma > 0");
            double closest = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                const double r = frame.pts[i].norm();
                if (r > 0) closest = std::min(closest, r);
            }
            if (!std::isfinite(closest)) closest = 1.0;
            for (int i = 0; i < n; ++i) {
                const double rho = frame.pts[i].norm() / (cfg.sigma * closest);
                // floor keeps the weighted matrix numerically full-rank on
                // stencils with a large farthest/closest distance ratio
                sqrt_w_[i] = std::max(std::exp(-0.5 * rho * rho), kMinSqrtWeight);
            }
        }

        Eigen::MatrixXd bt(s, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < s; ++j)
                bt(j, i) = sqrt_w_[i] * eval_monomial<D>(basis.exponents[j], frame.pts[i]);

        Eigen::Index rank;
        if (cfg.solve == LeastSquaresSolve::SVD) {
            svd_.setThreshold(kRankThreshold);
            svd_.compute(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
            rank = svd_.rank();
        } else {
            cod_.setThreshold(kRankThreshold);
            cod_.compute(bt);
            rank = cod_.rank();
        }
        if (rank < s && !cfg.allow_rank_deficient)
            throw DegenerateStencil(node_id, "monomial matrix rank " + std::to_string(rank) +
                                                 " below basis size " + std::to_string(s));
    }

    /// Stencil weights for one operator; the factorization is reused.
    Eigen::VectorXd weights(const LinearOperator& op) const {
        const int s = basis_.size();
        Eigen::VectorXd ell(s);
        for (int j = 0; j < s; ++j) ell[j] = apply_operator_to_monomial<D>(op, basis_.exponents[j]);
        Eigen::VectorXd y = cfg_.solve == LeastSquaresSolve::SVD ? svd_.solve(ell).eval()
                                                                 : cod_.solve(ell).eval();
        return sqrt_w_.cwiseProduct(y) * std::pow(frame_.radius, -op.order());
    }

private:
    static constexpr double kRankThreshold = 1e-10;
    static constexpr double kMinSqrtWeight = 1e-4;

    LocalFrame<D> frame_;
    const MonomialBasis<D>& basis_;
    WLSConfig cfg_;
    Eigen::VectorXd sqrt_w_;
    Eigen::BDCSVD<Eigen::MatrixXd> svd_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

/// One-shot form.
template <int D>
Eigen::VectorXd wls_weights(const Stencil& stencil, const NodeSet<D>& nodes, const LinearOperator& op,
                            const WLSConfig& cfg) {
    MonomialBasis<D> basis(cfg.degree);
    WlsShapeSolver<D> solver(local_frame(nodes, stencil, cfg.stencil_override), basis, cfg,
                             stencil.center);
    return solver.weights(op);
}

}  // namespace mfree
