#pragma once

#include "graphprop/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace graphprop {

struct CgStats {
    Index iterations = 0;
    double relative_residual = 0.0;
    bool converged = true;
};

/// Jacobi-preconditioned conjugate gradient for an SPD operator.
///
/// `apply(x, y)` writes y = A x. Stops once ||b - A x|| <= rel_tol * ||b||.
/// `x` holds the initial guess on entry.
template <class Apply>
CgStats preconditioned_cg(Apply&& apply, const Eigen::VectorXd& inv_diag, const Eigen::VectorXd& b,
                          Eigen::VectorXd& x, double rel_tol, Index max_iters) {
    CgStats stats;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero();
        return stats;
    }
    Eigen::VectorXd r(b.size()), z(b.size()), p(b.size()), q(b.size());
    apply(x, q);
    r = b - q;
    double rnorm = r.norm();
    z = inv_diag.cwiseProduct(r);
    p = z;
    double rz = r.dot(z);
    Index it = 0;
    while (rnorm > rel_tol * bnorm && it < max_iters) {
        apply(p, q);
        const double pq = p.dot(q);
        if (!(pq > 0.0)) break;  // operator not positive definite on p
        const double alpha = rz / pq;
        x.noalias() += alpha * p;
        r.noalias() -= alpha * q;
        rnorm = r.norm();
        ++it;
        if (rnorm <= rel_tol * bnorm) break;
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    // Recompute the true residual; the recurrence drifts over long runs.
    apply(x, q);
    stats.iterations = it;
    stats.relative_residual = (b - q).norm() / bnorm;
    stats.converged = stats.relative_residual <= rel_tol;
    return stats;
}

struct PowerIterationOptions {
    double rel_tol = 1e-9;
    Index max_iters = 10000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Largest singular value of a rows x cols operator via power iteration on
/// its Gram matrix. `apply(x, y)` computes y = M x, `apply_t(y, x)` x = M^T y.
template <class Apply, class ApplyT>
double spectral_norm(Apply&& apply, ApplyT&& apply_t, Index rows, Index cols,
                     const PowerIterationOptions& opt = {}) {
    if (rows == 0 || cols == 0) return 0.0;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Eigen::VectorXd x(cols);
    for (Index i = 0; i < cols; ++i) x[i] = unif(rng);
    x.normalize();
    Eigen::VectorXd y(rows), g(cols);
    double mu = 0.0;
    for (Index it = 0; it < opt.max_iters; ++it) {
        apply(x, y);
        apply_t(y, g);
        const double next = x.dot(g);  // Rayleigh quotient of M^T M
        const double gnorm = g.norm();
        if (gnorm == 0.0) return 0.0;
        x = g / gnorm;
        if (it > 0 && std::abs(next - mu) <= opt.rel_tol * std::abs(next)) {
            mu = next;
            break;
        }
        mu = next;
    }
    return std::sqrt(std::max(mu, 0.0));
}

/// Spectral norm of an explicit (dense or sparse) matrix.
template <class Matrix>
double spectral_norm(const Matrix& m, const PowerIterationOptions& opt = {}) {
    return spectral_norm([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = m * x; },
                         [&](const Eigen::VectorXd& y, Eigen::VectorXd& x) { x.noalias() = m.transpose() * y; },
                         m.rows(), m.cols(), opt);
}

} // namespace graphprop
