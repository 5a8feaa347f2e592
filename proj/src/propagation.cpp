#include "graphprop/propagation.hpp"

#include "graphprop/errors.hpp"
#include "graphprop/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <future>
#include <string>

namespace graphprop {

namespace {

void check_observed_values(const ObservationSet& omega, const FiberMatrix& values) {
    if (values.rows() != omega.observed_count()) {
        fail(ErrorKind::ShapeMismatch, "observed values have " + std::to_string(values.rows()) +
                                           " rows for " + std::to_string(omega.observed_count()) + " observed nodes");
    }
    if (values.cols() < 1) fail(ErrorKind::ShapeMismatch, "fiber matrix needs at least one channel");
    if (!values.allFinite()) fail(ErrorKind::NonFiniteInput, "observed fibers must be finite");
}

Eigen::RowVectorXd fill_value(const FiberMatrix& observed_values) {
    if (observed_values.rows() == 0) return Eigen::RowVectorXd::Zero(observed_values.cols());
    return observed_values.colwise().mean();
}

SparseMatrix select_principal(const SparseMatrix& m, const std::vector<Index>& keep) {
    std::vector<Index> pos(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<Index>(i);
    std::vector<Eigen::Triplet<double>> trips;
    for (Index col : keep) {
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            if (pos[it.index()] >= 0) trips.emplace_back(pos[it.index()], pos[col], it.value());
        }
    }
    SparseMatrix out(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

} // namespace

CompletionResult solve_steady_state(const SparseGraph& g, const ObservationSet& omega,
                                    const FiberMatrix& observed_values, const SolveOptions& opt) {
    if (omega.n() != g.n()) fail(ErrorKind::ShapeMismatch, "observation set and graph disagree on n");
    check_observed_values(omega, observed_values);

    const Index n = g.n();
    const Index channels = observed_values.cols();
    CompletionResult res;
    res.observed_ids = omega.observed();
    res.completed.resize(n, channels);
    for (Index i = 0; i < omega.observed_count(); ++i) res.completed.row(res.observed_ids[i]) = observed_values.row(i);

    const std::vector<Index> missing = omega.missing();
    if (missing.empty()) return res;

    // Components that contain at least one observed node.
    const std::vector<Index> comp = connected_components(g);
    std::vector<bool> grounded(static_cast<std::size_t>(n), false);
    for (Index id : res.observed_ids) grounded[comp[id]] = true;

    for (Index id : missing) {
        if (g.degree()[id] == 0.0) {
            res.excluded_ids.push_back(id);
        } else if (!grounded[comp[id]]) {
            if (opt.unreachable == UnreachablePolicy::Throw) {
                fail(ErrorKind::UnreachableComponent,
                     "missing node " + std::to_string(id) + " has no observed node in its component");
            }
            res.excluded_ids.push_back(id);
        } else {
            res.filled_ids.push_back(id);
        }
    }

    const Eigen::RowVectorXd fill = fill_value(observed_values);
    for (Index id : res.excluded_ids) res.completed.row(id) = fill;
    if (res.filled_ids.empty()) return res;

    // rhs = -L_co F_o = A_co F_o, restricted to the solved rows.
    const Index m = static_cast<Index>(res.filled_ids.size());
    const SparseMatrix& a = g.adjacency();
    const std::vector<bool> is_obs = omega.mask();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, channels);
    for (Index i = 0; i < m; ++i) {
        for (SparseMatrix::InnerIterator it(a, res.filled_ids[i]); it; ++it) {
            if (is_obs[it.index()]) rhs.row(i) += it.value() * res.completed.row(it.index());
        }
    }
    const SparseMatrix lap = select_principal(g.laplacian(), res.filled_ids);

    Eigen::MatrixXd solution(m, channels);
    if (opt.solver == LinearSolver::Cholesky) {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(lap);
        if (ldlt.info() != Eigen::Success) fail(ErrorKind::UnreachableComponent, "grounded Laplacian is singular");
        solution = ldlt.solve(rhs);
    } else {
        const Index cap = opt.max_iters > 0 ? opt.max_iters : 10 * m;
        const Eigen::VectorXd inv_diag = lap.diagonal().cwiseInverse();
        auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = lap * x; };
        for (Index c = 0; c < channels; ++c) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
            const CgStats s = preconditioned_cg(apply, inv_diag, rhs.col(c), x, opt.rel_tol, cap);
            res.stats.iterations = std::max(res.stats.iterations, s.iterations);
            res.stats.converged = res.stats.converged && s.converged;
            solution.col(c) = x;
        }
        if (!res.stats.converged) {
            spdlog::warn("conjugate gradient stopped before reaching relative residual {:g}", opt.rel_tol);
        }
    }
    res.stats.residual_norm = (lap * solution - rhs).norm();
    for (Index i = 0; i < m; ++i) res.completed.row(res.filled_ids[i]) = solution.row(i);
    return res;
}

CompletionResult diffuse_iterative(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& initial,
                                   const DiffusionOptions& opt) {
    if (omega.n() != g.n() || initial.rows() != g.n()) {
        fail(ErrorKind::ShapeMismatch, "initial fibers must have one row per node");
    }
    if (!initial.allFinite()) fail(ErrorKind::NonFiniteInput, "initial fibers must be finite");

    CompletionResult res;
    res.completed = initial;
    res.observed_ids = omega.observed();
    const std::vector<Index> missing = omega.missing();
    for (Index id : missing) (g.degree()[id] == 0.0 ? res.excluded_ids : res.filled_ids).push_back(id);
    if (res.filled_ids.empty() || opt.max_iters == 0) return res;

    double step = opt.step;
    if (step <= 0.0) {
        double max_deg = 0.0;
        for (Index id : res.filled_ids) max_deg = std::max(max_deg, g.degree()[id]);
        step = 1.0 / max_deg;
    }

    // Row-wise: f_i <- f_i - step * (d_i f_i - sum_j a_ij f_j), Jacobi style.
    const SparseMatrix& a = g.adjacency();
    const Index channels = initial.cols();
    FiberMatrix update(static_cast<Index>(res.filled_ids.size()), channels);
    Index it = 0;
    res.stats.converged = false;
    while (it < opt.max_iters) {
        for (std::size_t i = 0; i < res.filled_ids.size(); ++i) {
            const Index id = res.filled_ids[i];
            Eigen::RowVectorXd acc = g.degree()[id] * res.completed.row(id);
            for (SparseMatrix::InnerIterator e(a, id); e; ++e) acc -= e.value() * res.completed.row(e.index());
            update.row(static_cast<Index>(i)) = -step * acc;
        }
        for (std::size_t i = 0; i < res.filled_ids.size(); ++i) {
            res.completed.row(res.filled_ids[i]) += update.row(static_cast<Index>(i));
        }
        ++it;
        if (update.norm() <= opt.tol) {
            res.stats.converged = true;
            break;
        }
    }
    res.stats.iterations = it;

    double resid2 = 0.0;
    for (Index id : res.filled_ids) {
        Eigen::RowVectorXd acc = g.degree()[id] * res.completed.row(id);
        for (SparseMatrix::InnerIterator e(a, id); e; ++e) acc -= e.value() * res.completed.row(e.index());
        resid2 += acc.squaredNorm();
    }
    res.stats.residual_norm = std::sqrt(resid2);
    if (!res.stats.converged) spdlog::warn("diffusion hit max_iters={} before converging", opt.max_iters);
    return res;
}

std::vector<CompletionResult> propagate_all(const SparseGraph& g, std::span<const Acquisition> acquisitions,
                                            const SolveOptions& opt, bool parallel) {
    std::vector<CompletionResult> results(acquisitions.size());
    if (parallel && acquisitions.size() > 1) {
        std::vector<std::future<CompletionResult>> jobs;
        for (const auto& acq : acquisitions) {
            jobs.push_back(std::async(std::launch::async,
                                      [&g, &acq, &opt] { return solve_steady_state(g, acq.omega, acq.observed_values, opt); }));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < acquisitions.size(); ++i) {
            results[i] = solve_steady_state(g, acquisitions[i].omega, acquisitions[i].observed_values, opt);
        }
    }
    return results;
}

GraphPropOutput graphprop(std::span<const Acquisition> acquisitions, const GraphPropOptions& opt) {
    if (acquisitions.empty()) fail(ErrorKind::InvalidArgument, "graphprop needs at least one acquisition");
    const Index n = acquisitions.front().omega.n();
    const Index channels = acquisitions.front().observed_values.cols();
    for (const auto& acq : acquisitions) {
        if (acq.omega.n() != n) fail(ErrorKind::ShapeMismatch, "acquisitions disagree on node count");
        if (acq.observed_values.cols() != channels) fail(ErrorKind::ShapeMismatch, "acquisitions disagree on channels");
        check_observed_values(acq.omega, acq.observed_values);
    }

    std::vector<EdgeSet> edge_sets;
    edge_sets.reserve(acquisitions.size());
    for (const auto& acq : acquisitions) edge_sets.push_back(knn_edges(acq.observed_values, acq.omega, opt.k));

    GraphPropOutput out;
    out.graph = build_graph(union_edges(edge_sets));

    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (const auto& acq : acquisitions) {
        for (Index id : acq.omega.observed()) covered[id] = true;
    }
    for (Index i = 0; i < n; ++i) {
        if (!covered[i]) out.uncovered.push_back(i);
    }
    if (!out.uncovered.empty()) {
        spdlog::warn("coverage violation: {} node(s) observed in no acquisition are excluded", out.uncovered.size());
    }

    out.results = propagate_all(out.graph, acquisitions, opt.solve, opt.parallel);
    return out;
}

std::vector<int> classify_by_median(const CompletionResult& result, Index channel) {
    if (channel < 0 || channel >= result.completed.cols()) fail(ErrorKind::InvalidArgument, "channel out of range");
    const auto& f = result.completed;
    std::vector<int> labels(static_cast<std::size_t>(f.rows()), 0);
    for (Index id : result.observed_ids) labels[id] = f(id, channel) > 0.5 ? 1 : 0;
    if (result.filled_ids.empty()) return labels;

    std::vector<double> solved;
    solved.reserve(result.filled_ids.size());
    for (Index id : result.filled_ids) solved.push_back(f(id, channel));
    std::sort(solved.begin(), solved.end());
    const std::size_t m = solved.size();
    const double median = m % 2 ? solved[m / 2] : 0.5 * (solved[m / 2 - 1] + solved[m / 2]);

    for (Index id : result.filled_ids) labels[id] = f(id, channel) > median ? 1 : 0;
    for (Index id : result.excluded_ids) labels[id] = f(id, channel) > median ? 1 : 0;
    return labels;
}

} // namespace graphprop
