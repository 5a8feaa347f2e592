#pragma once

#include "graphprop/graph.hpp"
#include "graphprop/tensor.hpp"

#include <span>
#include <vector>

namespace graphprop {

// ---------------------------------------------------------------------------
// GTVM: graph total variation minimisation inpainting.
// ---------------------------------------------------------------------------

struct GtvmOptions {
    double rel_tol = 1e-10;
    Index max_iters = 0;       // 0 means 20 * (number of unknowns)
    Index dense_limit = 300;   // n at or below this uses a dense least-squares solve
};

struct GtvmResult {
    FiberMatrix completed;
    bool singular = false;     // least-norm solution returned
    Index iterations = 0;
    double relative_residual = 0.0;  // of the normal equations
};

/// Minimizes ||F - A'F||_F^2 subject to F_o = T_o, A' = A / |lambda_max(A)|.
/// `observed_values` rows align with omega.observed().
GtvmResult gtvm_inpaint(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& observed_values,
                        const GtvmOptions& opt = {});

/// Objective ||F - A'F||_F^2 for a full n-row F, given lambda_max(A).
double gtvm_objective(const SparseGraph& g, double lambda_max, const FiberMatrix& f);

// ---------------------------------------------------------------------------
// HaLRTC: ADMM over weighted mode-unfolding nuclear norms.
// ---------------------------------------------------------------------------

struct HalrtcParams {
    std::vector<double> alphas;  // empty means 1/m for every mode
    double rho = 1e-3;
    double rho_growth = 1.05;
    double rho_max = 1e3;
    Index max_iters = 300;
    double tol = 1e-5;           // on the relative iterate change and on max_i ||M_i - X||
    bool record_objective = false;

    /// Throws InvalidArgument unless alphas are nonnegative, sum to 1 within
    /// 1e-12 and match `order` (when nonempty), and rho > 0.
    void validate(std::size_t order) const;
};

struct HalrtcResult {
    DenseTensor completed;
    Index iterations = 0;
    bool converged = false;
    double final_rho = 0.0;
    std::vector<double> objective_trace;  // sum_i alpha_i ||X_(i)||_* per iteration
};

/// `mask` has the shape of `t`; nonzero entries are observed.
HalrtcResult halrtc_complete(const DenseTensor& t, const DenseTensor& mask, const HalrtcParams& p = {});

/// sum_i alpha_i ||X_(i)||_* with alphas resolved as in HalrtcParams.
double weighted_nuclear_norm(const DenseTensor& t, const std::vector<double>& alphas);

/// Singular value thresholding of a matrix: U max(S - tau, 0) V^T.
Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& m, double tau);

/// Acquisitions stacked along a new trailing mode.
DenseTensor stack_acquisitions(std::span<const DenseTensor> parts);
std::vector<DenseTensor> unstack_acquisitions(const DenseTensor& stacked);

} // namespace graphprop
