#pragma once

#include "graphprop/graph.hpp"
#include "graphprop/tensor.hpp"

#include <span>
#include <vector>

namespace graphprop {

enum class LinearSolver { ConjugateGradient, Cholesky };

/// What to do with missing nodes whose connected component holds no
/// observed node (the grounded Laplacian is singular there).
enum class UnreachablePolicy { Throw, Exclude };

struct SolveOptions {
    LinearSolver solver = LinearSolver::ConjugateGradient;
    double rel_tol = 1e-10;
    Index max_iters = 0;  // 0 means 10 * (number of unknowns)
    UnreachablePolicy unreachable = UnreachablePolicy::Throw;
};

struct SolverStats {
    Index iterations = 0;
    double residual_norm = 0.0;  // ||L_cc F_c + L_co F_o||_F over solved rows
    bool converged = true;
};

struct CompletionResult {
    FiberMatrix completed;              // all n rows
    std::vector<Index> observed_ids;
    std::vector<Index> filled_ids;      // missing nodes solved on the graph
    std::vector<Index> excluded_ids;    // zero-degree / unreachable, filled by policy
    SolverStats stats;
};

/// Steady state of masked diffusion: solves L_cc F_c = -L_co F_o.
///
/// `observed_values` has one row per observed node in increasing id order.
/// Zero-degree missing nodes are always excluded; unreachable components
/// follow `opt.unreachable`. Excluded rows receive the per-channel mean of the
/// observed fibers.
CompletionResult solve_steady_state(const SparseGraph& g, const ObservationSet& omega,
                                    const FiberMatrix& observed_values, const SolveOptions& opt = {});

struct DiffusionOptions {
    double step = 0.0;  // 0 selects 1 / (max degree over missing nodes)
    Index max_iters = 100000;
    double tol = 1e-12;  // on the Frobenius norm of one update
};

/// Explicit diffusion F_c <- F_c - step (L_co F_o + L_cc F_c) with observed rows
/// held fixed. `initial` has n rows. stats.converged is false when max_iters
/// ran out; the last iterate is returned either way.
CompletionResult diffuse_iterative(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& initial,
                                   const DiffusionOptions& opt = {});

/// One partially observed acquisition: rows of `observed_values` align with
/// omega.observed().
struct Acquisition {
    ObservationSet omega;
    FiberMatrix observed_values;
};

struct GraphPropOptions {
    Index k = 10;
    SolveOptions solve{.unreachable = UnreachablePolicy::Exclude};
    bool parallel = true;  // run the per-acquisition solves concurrently
};

struct GraphPropOutput {
    SparseGraph graph;                  // unifying kNN graph
    std::vector<CompletionResult> results;  // one per acquisition
    std::vector<Index> uncovered;       // nodes observed in no acquisition
};

/// Per-acquisition kNN edge sets, their union, one shared Laplacian, then one
/// steady-state solve per acquisition.
GraphPropOutput graphprop(std::span<const Acquisition> acquisitions, const GraphPropOptions& opt = {});

/// Steady-state solve over an existing graph for several acquisitions.
std::vector<CompletionResult> propagate_all(const SparseGraph& g, std::span<const Acquisition> acquisitions,
                                            const SolveOptions& opt, bool parallel);

/// Binary labels from a completion: unobserved nodes get 1 when their value in
/// `channel` exceeds the median of the solved values (ties give 0); observed
/// nodes keep their given label (value > 0.5).
std::vector<int> classify_by_median(const CompletionResult& result, Index channel);

} // namespace graphprop
