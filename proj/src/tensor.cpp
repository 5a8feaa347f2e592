#include "graphprop/tensor.hpp"

#include "graphprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace graphprop {

namespace {

void check_shape(const Shape& shape) {
    for (Index e : shape) {
        if (e < 1) fail(ErrorKind::ShapeMismatch, "tensor extents must be >= 1");
    }
}

std::string shape_str(const Shape& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

// Extents before and after `mode` in fiber-fastest order.
std::pair<Index, Index> split_extents(const Shape& shape, std::size_t mode) {
    Index before = 1, after = 1;
    for (std::size_t k = 0; k < mode; ++k) before *= shape[k];
    for (std::size_t k = mode + 1; k < shape.size(); ++k) after *= shape[k];
    return {before, after};
}

} // namespace

Index shape_product(std::span<const Index> shape) {
    return std::accumulate(shape.begin(), shape.end(), Index{1}, std::multiplies<>());
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
    check_shape(shape_);
    values_.assign(static_cast<std::size_t>(shape_product(shape_)), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    check_shape(shape_);
    if (static_cast<Index>(values_.size()) != shape_product(shape_)) {
        fail(ErrorKind::ShapeMismatch, "buffer length " + std::to_string(values_.size()) +
                                           " does not match shape " + shape_str(shape_));
    }
    if (!all_finite()) fail(ErrorKind::NonFiniteInput, "tensor values must be finite");
}

Index DenseTensor::linear_index(std::span<const Index> idx) const {
    if (idx.size() != shape_.size()) fail(ErrorKind::ShapeMismatch, "index arity mismatch");
    Index lin = 0;
    for (std::size_t k = shape_.size(); k-- > 0;) {
        if (idx[k] < 0 || idx[k] >= shape_[k]) fail(ErrorKind::InvalidArgument, "index out of range");
        lin = lin * shape_[k] + idx[k];
    }
    return lin;
}

double DenseTensor::operator()(std::initializer_list<Index> idx) const {
    return values_[linear_index(std::span<const Index>(idx.begin(), idx.size()))];
}

double& DenseTensor::operator()(std::initializer_list<Index> idx) {
    return values_[linear_index(std::span<const Index>(idx.begin(), idx.size()))];
}

bool DenseTensor::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

FiberMatrix matricize(const DenseTensor& t, std::size_t mode) {
    if (mode >= t.order()) {
        fail(ErrorKind::InvalidArgument, "mode " + std::to_string(mode) + " out of range for order " +
                                             std::to_string(t.order()));
    }
    const Index channels = t.extent(mode);
    const auto [before, after] = split_extents(t.shape(), mode);
    FiberMatrix f(before * after, channels);
    const auto v = t.values();
    for (Index b = 0; b < after; ++b) {
        for (Index c = 0; c < channels; ++c) {
            const Index src = before * (c + channels * b);
            for (Index a = 0; a < before; ++a) f(a + before * b, c) = v[src + a];
        }
    }
    return f;
}

DenseTensor refold(const FiberMatrix& f, const Shape& shape, std::size_t mode) {
    if (mode >= shape.size()) fail(ErrorKind::InvalidArgument, "mode out of range");
    check_shape(shape);
    if (f.size() != shape_product(shape) || f.cols() != shape[mode]) {
        fail(ErrorKind::ShapeMismatch, std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                                           " fiber matrix cannot refold into " + shape_str(shape));
    }
    const Index channels = shape[mode];
    const auto [before, after] = split_extents(shape, mode);
    DenseTensor t(shape);
    auto v = t.values();
    for (Index b = 0; b < after; ++b) {
        for (Index c = 0; c < channels; ++c) {
            const Index dst = before * (c + channels * b);
            for (Index a = 0; a < before; ++a) v[dst + a] = f(a + before * b, c);
        }
    }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, std::size_t mode, const Eigen::MatrixXd& m) {
    if (mode >= t.order()) fail(ErrorKind::InvalidArgument, "mode out of range");
    if (m.cols() != t.extent(mode)) {
        fail(ErrorKind::ShapeMismatch, "mode product: matrix has " + std::to_string(m.cols()) +
                                           " columns, tensor extent is " + std::to_string(t.extent(mode)));
    }
    const FiberMatrix fibers = matricize(t, mode);
    Shape out_shape = t.shape();
    out_shape[mode] = m.rows();
    return refold(fibers * m.transpose(), out_shape, mode);
}

void TuckerFactors::validate(double tol) const {
    if (factors.size() != core.order()) {
        fail(ErrorKind::ShapeMismatch, "factor count differs from core order");
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& u = factors[k];
        if (u.rows() != core.extent(k)) {
            fail(ErrorKind::ShapeMismatch, "factor " + std::to_string(k) + " has " + std::to_string(u.rows()) +
                                               " rows, core extent is " + std::to_string(core.extent(k)));
        }
        if (u.rows() > u.cols()) fail(ErrorKind::InvalidArgument, "factor rank exceeds extent");
        const Eigen::MatrixXd gram = u * u.transpose();
        const double dev = (gram - Eigen::MatrixXd::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff();
        if (dev > tol) fail(ErrorKind::InvalidArgument, "factor " + std::to_string(k) + " rows are not orthonormal");
    }
}

DenseTensor tucker_synthesize(const TuckerFactors& tf) {
    tf.validate();
    DenseTensor out = tf.core;
    for (std::size_t k = 0; k < tf.factors.size(); ++k) {
        out = mode_product(out, k, tf.factors[k].transpose());
    }
    return out;
}

Eigen::VectorXd unfolding_singular_values(const DenseTensor& t, std::size_t mode) {
    const FiberMatrix f = matricize(t, mode);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(f);
    return svd.singularValues();
}

Index numerical_rank(const Eigen::VectorXd& singular_values, double rel_cutoff) {
    if (singular_values.size() == 0) return 0;
    const double top = singular_values.maxCoeff();
    if (top == 0.0) return 0;
    return (singular_values.array() > rel_cutoff * top).count();
}

} // namespace graphprop
