#include "graphprop/bounds.hpp"

#include "graphprop/errors.hpp"

#include <cmath>
#include <string>

namespace graphprop {

namespace {

void require_missing_degrees(const SparseGraph& g, const std::vector<Index>& missing) {
    for (Index id : missing) {
        if (g.degree()[id] == 0.0) {
            fail(ErrorKind::SingularDegree, "missing node " + std::to_string(id) + " has degree 0");
        }
    }
}

SparseMatrix identity(Index n) {
    SparseMatrix i(n, n);
    i.setIdentity();
    return i;
}

} // namespace

BoundMatrices bound_matrices(const SparseGraph& g, const ObservationSet& omega) {
    GraphBlocks b = partition_blocks(g, omega);
    require_missing_degrees(g, b.missing);
    const Index nc = static_cast<Index>(b.missing.size());
    const Eigen::VectorXd dinv = b.D_cc.cwiseInverse();

    BoundMatrices m;
    const SparseMatrix scaled_cc = dinv.asDiagonal() * b.A_cc;
    m.U = identity(nc) + scaled_cc;
    m.V = identity(nc) - scaled_cc;
    m.Y = dinv.asDiagonal() * b.A_co;
    m.U.makeCompressed();
    m.V.makeCompressed();
    m.Y.makeCompressed();
    m.observed = std::move(b.observed);
    m.missing = std::move(b.missing);
    return m;
}

DenseProjectors dense_projectors(const SparseGraph& g, const ObservationSet& omega) {
    const std::vector<Index> missing = omega.missing();
    require_missing_degrees(g, missing);
    const Index n = g.n();
    const Eigen::MatrixXd a = Eigen::MatrixXd(g.adjacency());
    DenseProjectors out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (Index id : missing) {
        const Eigen::RowVectorXd walk = a.row(id) / g.degree()[id];
        out.P.row(id) = -walk;
        out.Q.row(id) = walk;
        out.P(id, id) += 1.0;
        out.Q(id, id) += 1.0;
    }
    return out;
}

double compute_psi(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth) {
    if (truth.rows() != g.n()) fail(ErrorKind::ShapeMismatch, "truth must have one row per node");
    const std::vector<Index> missing = omega.missing();
    require_missing_degrees(g, missing);
    double sum = 0.0;
    for (Index id : missing) {
        Eigen::RowVectorXd row = truth.row(id);
        const double inv = 1.0 / g.degree()[id];
        for (SparseMatrix::InnerIterator it(g.adjacency(), id); it; ++it) {
            row -= inv * it.value() * truth.row(it.index());
        }
        sum += row.squaredNorm();
    }
    return std::sqrt(sum);
}

double compute_phi(const SparseGraph& g, const ObservationSet& omega, const PowerIterationOptions& opt) {
    const BoundMatrices m = bound_matrices(g, omega);
    return spectral_norm(m.U, opt);
}

BoundValue graphprop_bound(double psi, double phi) {
    BoundValue b;
    if (!(phi < 2.0 - kPhiGuard)) return b;
    b.applicable = true;
    b.value = std::abs(psi) / (2.0 - phi);
    b.loose = 2.0 - phi < kLooseMargin;
    return b;
}

double adjacency_lambda_max(const SparseGraph& g, const PowerIterationOptions& opt) {
    // Perron root of a nonnegative symmetric matrix equals its spectral norm.
    return spectral_norm(g.adjacency(), opt);
}

GtvmBound gtvm_bound(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth,
                     const PowerIterationOptions& opt) {
    if (g.edge_count() == 0) fail(ErrorKind::EmptyGraph, "GTVM normalization needs at least one edge");
    if (truth.rows() != g.n()) fail(ErrorKind::ShapeMismatch, "truth must have one row per node");
    GtvmBound out;
    out.lambda_max = adjacency_lambda_max(g, opt);
    const double scale = 1.0 / std::abs(out.lambda_max);
    out.eta = (truth - scale * (g.adjacency() * truth)).norm();

    const GraphBlocks b = partition_blocks(g, omega);
    const SparseMatrix a_oc = scale * b.A_oc;
    const SparseMatrix a_co = scale * b.A_co;
    const SparseMatrix a_cc = scale * b.A_cc;
    const Index no = a_oc.rows(), nc = a_oc.cols();
    auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        y.resize(no + nc);
        y.head(no).noalias() = a_oc * x;
        y.tail(nc).noalias() = x + a_cc * x;
    };
    auto apply_t = [&](const Eigen::VectorXd& y, Eigen::VectorXd& x) {
        x.noalias() = a_co * y.head(no);  // (A'_oc)^T = A'_co
        x.noalias() += y.tail(nc) + a_cc * y.tail(nc);
    };
    out.q = spectral_norm(apply, apply_t, no + nc, nc, opt);
    if (out.q < 2.0 - kPhiGuard) {
        out.bound.applicable = true;
        out.bound.value = 2.0 * std::abs(out.eta) / (2.0 - out.q);
        out.bound.loose = 2.0 - out.q < kLooseMargin;
    }
    return out;
}

bool BoundReport::holds(double slack) const {
    return !bound.applicable || measured_error <= bound.value + slack;
}

double missing_error_norm(const ObservationSet& omega, const FiberMatrix& truth, const FiberMatrix& estimate) {
    if (truth.rows() != omega.n() || estimate.rows() != omega.n() || truth.cols() != estimate.cols()) {
        fail(ErrorKind::ShapeMismatch, "truth and estimate must both have n rows");
    }
    double sum = 0.0;
    for (Index id : omega.missing()) sum += (truth.row(id) - estimate.row(id)).squaredNorm();
    return std::sqrt(sum);
}

BoundReport make_bound_report(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& truth,
                              const FiberMatrix& estimate, const FiberMatrix* gtvm_estimate) {
    BoundReport r;
    r.psi = compute_psi(g, omega, truth);
    r.phi = compute_phi(g, omega);
    r.bound = graphprop_bound(r.psi, r.phi);
    r.measured_error = missing_error_norm(omega, truth, estimate);
    const GtvmBound gb = gtvm_bound(g, omega, truth);
    r.gtvm_eta = gb.eta;
    r.gtvm_q = gb.q;
    r.gtvm_bound = gb.bound;
    if (gtvm_estimate) r.gtvm_measured_error = missing_error_norm(omega, truth, *gtvm_estimate);
    return r;
}

nlohmann::json to_json(const BoundReport& r) {
    auto bound_or_null = [](const BoundValue& b) -> nlohmann::json {
        if (!b.applicable) return nullptr;
        return b.value;
    };
    nlohmann::json j;
    j["psi"] = r.psi;
    j["phi"] = r.phi;
    j["bound"] = bound_or_null(r.bound);
    j["applicable"] = r.bound.applicable;
    j["loose"] = r.bound.loose;
    j["measured_error"] = r.measured_error;
    j["gtvm_eta"] = r.gtvm_eta;
    j["gtvm_q"] = r.gtvm_q;
    j["gtvm_bound"] = bound_or_null(r.gtvm_bound);
    j["gtvm_applicable"] = r.gtvm_bound.applicable;
    if (r.gtvm_measured_error) j["gtvm_measured_error"] = *r.gtvm_measured_error;
    return j;
}

} // namespace graphprop
