#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <string>

#include "mfree/assembly.hpp"

namespace mfree {

struct SolverConfig {
    enum class Method { SparseLU, BiCGSTAB };

    Method method = Method::SparseLU;
    double tol = 1e-14;
    int max_iter = 500;
    double ilut_drop_tol = 1e-5;
    int ilut_fill_factor = 30;

    void validate() const {
        if (!(tol > 0) || max_iter < 1 || ilut_fill_factor < 1)
            throw ConfigError("solver config requires tol > 0, max_iter >= 1, fill_factor >= 1");
    }
};

struct SolveReport {
    std::string status;  // "converged" | "no_convergence" | "nan"
    int iterations = 0;
    double residual = 0.0;  // recomputed from the returned solution
    double seconds = 0.0;
    int threads = 1;
};

/// Solve the assembled system. Direct SparseLU throws on a singular matrix;
/// the iterative path never throws on non-convergence — the best iterate and
/// an honest status are returned so failed runs stay recordable.
inline std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys, const SolverConfig& cfg) {
    cfg.validate();
    if (sys.matrix.rows() != sys.matrix.cols()) throw ConfigError("system matrix must be square");
    SolveReport report;
    Eigen::VectorXd x;
    const auto t0 = std::chrono::steady_clock::now();

    if (cfg.method == SolverConfig::Method::SparseLU) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(sys.matrix);
        if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU factorization failed");
        x = lu.solve(sys.rhs);
        report.status = "converged";
        report.iterations = 0;
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
        it.preconditioner().setDroptol(cfg.ilut_drop_tol);
        it.preconditioner().setFillfactor(cfg.ilut_fill_factor);
        it.setTolerance(cfg.tol);
        it.setMaxIterations(cfg.max_iter);
        it.compute(sys.matrix);
        x = it.solve(sys.rhs);
        report.iterations = static_cast<int>(it.iterations());
        report.status = it.info() == Eigen::Success ? "converged" : "no_convergence";
    }

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!x.allFinite()) report.status = "nan";
    const double bnorm = sys.rhs.norm();
    Eigen::VectorXd r = sys.matrix * x - sys.rhs;
    report.residual = bnorm > 0 ? r.norm() / bnorm : r.norm();
    return {std::move(x), report};
}

}  // namespace mfree
