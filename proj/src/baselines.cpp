#include "graphprop/baselines.hpp"

#include "graphprop/bounds.hpp"
#include "graphprop/errors.hpp"
#include "graphprop/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include <cmath>
#include <numeric>
#include <string>

namespace graphprop {

// ---------------------------------------------------------------------------
// GTVM

double gtvm_objective(const SparseGraph& g, double lambda_max, const FiberMatrix& f) {
    const FiberMatrix r = f - (g.adjacency() * f) / std::abs(lambda_max);
    return r.squaredNorm();
}

GtvmResult gtvm_inpaint(const SparseGraph& g, const ObservationSet& omega, const FiberMatrix& observed_values,
                        const GtvmOptions& opt) {
    if (omega.n() != g.n()) fail(ErrorKind::ShapeMismatch, "observation set and graph disagree on n");
    if (observed_values.rows() != omega.observed_count()) {
        fail(ErrorKind::ShapeMismatch, "observed values must have one row per observed node");
    }
    if (!observed_values.allFinite()) fail(ErrorKind::NonFiniteInput, "observed fibers must be finite");
    if (g.edge_count() == 0) fail(ErrorKind::EmptyGraph, "GTVM needs at least one edge");

    const Index n = g.n();
    const Index channels = observed_values.cols();
    const std::vector<Index>& obs = omega.observed();
    const std::vector<Index> missing = omega.missing();
    const Index nc = static_cast<Index>(missing.size());

    GtvmResult res;
    res.completed = FiberMatrix::Zero(n, channels);
    for (Index i = 0; i < omega.observed_count(); ++i) res.completed.row(obs[i]) = observed_values.row(i);
    if (nc == 0) return res;

    const double scale = 1.0 / std::abs(adjacency_lambda_max(g));
    const SparseMatrix& a = g.adjacency();

    // B = I - A' is symmetric; the unknown block is B(:, c).
    FiberMatrix fixed = res.completed;  // observed rows set, missing rows zero
    const FiberMatrix b_fixed = fixed - scale * (a * fixed);
    const FiberMatrix bb_fixed = b_fixed - scale * (a * b_fixed);
    Eigen::MatrixXd rhs(nc, channels);
    for (Index i = 0; i < nc; ++i) rhs.row(i) = -bb_fixed.row(missing[i]);

    if (n <= opt.dense_limit) {
        const Eigen::MatrixXd bmat = Eigen::MatrixXd::Identity(n, n) - scale * Eigen::MatrixXd(a);
        Eigen::MatrixXd bc(n, nc);
        for (Index i = 0; i < nc; ++i) bc.col(i) = bmat.col(missing[i]);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(bc);
        cod.setThreshold(1e-12);
        res.singular = cod.rank() < nc;
        const Eigen::MatrixXd sol = cod.solve(-b_fixed);
        for (Index i = 0; i < nc; ++i) res.completed.row(missing[i]) = sol.row(i);
        const Eigen::MatrixXd normal = bc.transpose() * bc;
        const double rn = rhs.norm();
        res.relative_residual = rn > 0.0 ? (normal * sol - rhs).norm() / rn : 0.0;
    } else {
        std::vector<Index> pos(static_cast<std::size_t>(n), -1);
        for (Index i = 0; i < nc; ++i) pos[missing[i]] = i;
        Eigen::VectorXd full(n), bz(n), bbz(n);
        auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            full.setZero();
            for (Index i = 0; i < nc; ++i) full[missing[i]] = x[i];
            bz = full - scale * (a * full);
            bbz = bz - scale * (a * bz);
            y.resize(nc);
            for (Index i = 0; i < nc; ++i) y[i] = bbz[missing[i]];
        };
        // diag(B_c^T B_c)_i = 1 + sum_j A'_ji^2
        Eigen::VectorXd inv_diag(nc);
        for (Index i = 0; i < nc; ++i) {
            double s = 1.0;
            for (SparseMatrix::InnerIterator it(a, missing[i]); it; ++it) s += scale * scale * it.value() * it.value();
            inv_diag[i] = 1.0 / s;
        }
        const Index cap = opt.max_iters > 0 ? opt.max_iters : 20 * nc;
        double num = 0.0, den = 0.0;
        for (Index c = 0; c < channels; ++c) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(nc);
            const Eigen::VectorXd b = rhs.col(c);
            const CgStats s = preconditioned_cg(apply, inv_diag, b, x, opt.rel_tol, cap);
            res.iterations = std::max(res.iterations, s.iterations);
            if (!s.converged) res.singular = true;
            num += std::pow(s.relative_residual * b.norm(), 2);
            den += b.squaredNorm();
            for (Index i = 0; i < nc; ++i) res.completed(missing[i], c) = x[i];
        }
        res.relative_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    }
    if (res.singular) spdlog::warn("GTVM normal equations are singular or unconverged; returning least-norm estimate");
    return res;
}

// ---------------------------------------------------------------------------
// HaLRTC

void HalrtcParams::validate(std::size_t order) const {
    if (!(rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be positive");
    if (!(rho_growth >= 1.0) || !(rho_max >= rho)) fail(ErrorKind::InvalidArgument, "invalid rho schedule");
    if (max_iters < 0 || !(tol >= 0.0)) fail(ErrorKind::InvalidArgument, "invalid stopping rule");
    if (alphas.empty()) return;
    if (alphas.size() != order) fail(ErrorKind::InvalidArgument, "one alpha per mode required");
    double sum = 0.0;
    for (double a : alphas) {
        if (!(a >= 0.0)) fail(ErrorKind::InvalidArgument, "alphas must be nonnegative");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "alphas must sum to 1");
}

namespace {

std::vector<double> resolve_alphas(const std::vector<double>& alphas, std::size_t order) {
    if (!alphas.empty()) return alphas;
    return std::vector<double>(order, 1.0 / static_cast<double>(order));
}

// Eigen-decomposition of the smaller Gram matrix of m.
struct GramSvd {
    Eigen::VectorXd sigma;   // descending not guaranteed
    Eigen::MatrixXd basis;   // singular vectors on the small side
    bool left = false;       // true: basis spans columns of m (U), else rows (V)
};

GramSvd gram_svd(const Eigen::MatrixXd& m) {
    GramSvd out;
    out.left = m.rows() < m.cols();
    const Eigen::MatrixXd gram = out.left ? Eigen::MatrixXd(m * m.transpose()) : Eigen::MatrixXd(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    out.sigma = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    out.basis = es.eigenvectors();
    return out;
}

} // namespace

Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& m, double tau) {
    const GramSvd s = gram_svd(m);
    Eigen::VectorXd gain(s.sigma.size());
    for (Index i = 0; i < s.sigma.size(); ++i) {
        gain[i] = s.sigma[i] > tau ? (s.sigma[i] - tau) / s.sigma[i] : 0.0;
    }
    const Eigen::MatrixXd proj = s.basis * gain.asDiagonal() * s.basis.transpose();
    return s.left ? Eigen::MatrixXd(proj * m) : Eigen::MatrixXd(m * proj);
}

double weighted_nuclear_norm(const DenseTensor& t, const std::vector<double>& alphas_in) {
    const std::vector<double> alphas = resolve_alphas(alphas_in, t.order());
    double total = 0.0;
    for (std::size_t k = 0; k < t.order(); ++k) {
        if (alphas[k] == 0.0) continue;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(matricize(t, k));
        total += alphas[k] * svd.singularValues().sum();
    }
    return total;
}

HalrtcResult halrtc_complete(const DenseTensor& t, const DenseTensor& mask, const HalrtcParams& p) {
    if (mask.shape() != t.shape()) fail(ErrorKind::ShapeMismatch, "mask shape differs from tensor shape");
    p.validate(t.order());
    const std::vector<double> alphas = resolve_alphas(p.alphas, t.order());

    const auto tv = t.values();
    const auto mv = mask.values();
    const Index size = t.size();
    std::vector<Index> missing;
    for (Index i = 0; i < size; ++i) {
        if (mv[i] == 0.0) missing.push_back(i);
    }
    if (static_cast<Index>(missing.size()) == size) fail(ErrorKind::AllMissing, "HaLRTC needs an observed entry");

    HalrtcResult res;
    res.completed = t;
    res.final_rho = p.rho;
    for (Index i : missing) res.completed.values()[i] = 0.0;
    if (missing.empty()) {
        res.converged = true;
        return res;
    }

    const std::size_t order = t.order();
    const Shape& shape = t.shape();
    Eigen::Map<Eigen::VectorXd> x(res.completed.values().data(), size);
    std::vector<Eigen::VectorXd> duals(order, Eigen::VectorXd::Zero(size));
    std::vector<Eigen::VectorXd> aux(order, Eigen::VectorXd::Zero(size));
    Eigen::VectorXd previous(size), avg(size);
    double rho = p.rho;

    for (Index it = 0; it < p.max_iters; ++it) {
        previous = x;
        for (std::size_t k = 0; k < order; ++k) {
            Eigen::VectorXd z = x + duals[k] / rho;
            if (alphas[k] > 0.0) {
                const DenseTensor zt(shape, std::vector<double>(z.data(), z.data() + size));
                const DenseTensor shrunk = refold(singular_value_threshold(matricize(zt, k), alphas[k] / rho), shape, k);
                const auto sv = shrunk.values();
                aux[k] = Eigen::Map<const Eigen::VectorXd>(sv.data(), size);
            } else {
                aux[k] = z;
            }
        }
        avg.setZero();
        for (std::size_t k = 0; k < order; ++k) avg += aux[k] - duals[k] / rho;
        avg /= static_cast<double>(order);
        for (Index i : missing) x[i] = avg[i];
        double primal = 0.0;
        for (std::size_t k = 0; k < order; ++k) {
            duals[k] -= rho * (aux[k] - x);
            primal = std::max(primal, (aux[k] - x).norm());
        }

        ++res.iterations;
        if (p.record_objective) res.objective_trace.push_back(weighted_nuclear_norm(res.completed, alphas));
        const double prev_norm = previous.norm();
        const double scale = prev_norm > 0.0 ? prev_norm : 1.0;
        const double change = (x - previous).norm() / scale;
        rho = std::min(rho * p.rho_growth, p.rho_max);
        // A still-stalled iterate (everything thresholded away) has a large
        // primal residual, so both tests are required.
        if (change <= p.tol && primal / scale <= p.tol) {
            res.converged = true;
            break;
        }
    }
    res.final_rho = rho;
    // Observed entries come back verbatim.
    for (Index i = 0; i < size; ++i) {
        if (mv[i] != 0.0) res.completed.values()[i] = tv[i];
    }
    return res;
}

DenseTensor stack_acquisitions(std::span<const DenseTensor> parts) {
    if (parts.empty()) fail(ErrorKind::InvalidArgument, "nothing to stack");
    Shape shape = parts.front().shape();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(parts.front().size()) * parts.size());
    for (const auto& p : parts) {
        if (p.shape() != shape) fail(ErrorKind::ShapeMismatch, "stacked acquisitions must share a shape");
        values.insert(values.end(), p.values().begin(), p.values().end());
    }
    shape.push_back(static_cast<Index>(parts.size()));
    return DenseTensor(std::move(shape), std::move(values));
}

std::vector<DenseTensor> unstack_acquisitions(const DenseTensor& stacked) {
    if (stacked.order() < 2) fail(ErrorKind::ShapeMismatch, "need at least order 2 to unstack");
    Shape shape(stacked.shape().begin(), stacked.shape().end() - 1);
    const Index count = stacked.shape().back();
    const Index block = shape_product(shape);
    std::vector<DenseTensor> out;
    const auto v = stacked.values();
    for (Index i = 0; i < count; ++i) {
        out.emplace_back(shape, std::vector<double>(v.begin() + i * block, v.begin() + (i + 1) * block));
    }
    return out;
}

} // namespace graphprop
