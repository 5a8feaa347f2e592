#pragma once

#include "graphprop/graph.hpp"
#include "graphprop/linalg.hpp"

#include <nlohmann/json.hpp>

#include <optional>

namespace graphprop {

/// Block matrices of the error-bound derivation over the missing nodes c:
///   U = I + D_cc^-1 A_cc,  V = I - D_cc^-1 A_cc,  Y = D_cc^-1 A_co.
struct BoundMatrices {
    std::vector<Index> observed;
    std::vector<Index> missing;
    SparseMatrix U, V, Y;
};

/// Throws SingularDegree when any node of the graph has degree 0.
BoundMatrices bound_matrices(const SparseGraph& g, const ObservationSet& omega);

/// Dense n x n P = diag(1_c)(I - D^-1 A) and Q = diag(1_c)(I + D^-1 A) in
/// original node order. Intended for small test oracles.
struct DenseProjectors {
    Eigen::MatrixXd P, Q;
};
DenseProjectors dense_projectors(const SparseGraph& g, const ObservationSet& omega);

/// psi = ||P F0||_F evaluated row-wise on the missing nodes.
double compute_psi(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth);

/// phi = ||U||_2 by power iteration on U^T U.
double compute_phi(const SparseGraph& g, const ObservationSet& omega, const PowerIterationOptions& opt = {});

struct BoundValue {
    bool applicable = false;
    bool loose = false;  // applicable but 2 - phi is tiny
    double value = 0.0;
};

inline constexpr double kPhiGuard = 1e-9;
inline constexpr double kLooseMargin = 1e-6;

/// psi / (2 - phi) when phi < 2 - 1e-9, otherwise inapplicable.
BoundValue graphprop_bound(double psi, double phi);

struct GtvmBound {
    double lambda_max = 0.0;
    double eta = 0.0;
    double q = 0.0;
    BoundValue bound;
};

/// eta = ||F0 - A' F0||_F, q = ||[A'_oc ; I + A'_cc]||_2, bound 2 eta / (2 - q)
/// with A' = A / |lambda_max(A)|. Throws EmptyGraph for an edgeless graph.
GtvmBound gtvm_bound(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth,
                     const PowerIterationOptions& opt = {});

/// Largest eigenvalue of the (nonnegative, symmetric) adjacency matrix.
double adjacency_lambda_max(const SparseGraph& g, const PowerIterationOptions& opt = {});

struct BoundReport {
    double psi = 0.0;
    double phi = 0.0;
    BoundValue bound;
    double measured_error = 0.0;  // ||W_c||_F of the GraphProp completion
    double gtvm_eta = 0.0;
    double gtvm_q = 0.0;
    BoundValue gtvm_bound;
    std::optional<double> gtvm_measured_error;

    /// measured_error <= bound (+ slack) whenever the bound applies.
    bool holds(double slack = 1e-9) const;
};

/// Frobenius norm of (truth - estimate) over the missing rows.
double missing_error_norm(const ObservationSet& omega, const FiberMatrix& truth, const FiberMatrix& estimate);

/// Full report for one completion. `estimate` is the GraphProp output (n rows);
/// `gtvm_estimate`, when given, fills gtvm_measured_error.
BoundReport make_bound_report(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth,
                              const FiberMatrix& estimate, const FiberMatrix* gtvm_estimate = nullptr);

nlohmann::json to_json(const BoundReport& r);

} // namespace graphprop
