#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace graphprop {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

/// Rows are mode-m fibers (one per graph node), columns are the I_m channels.
using FiberMatrix = Eigen::MatrixXd;

/// Dense m-way array of doubles.
///
/// Storage is "fiber-fastest": the first index varies fastest, so element
/// (i_1, ..., i_m) lives at i_1 + I_1 (i_2 + I_2 (i_3 + ...)). With this
/// layout the buffer of an order-m tensor is exactly the column-major
/// n x I_m fiber matrix of its last mode.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.size(); }
    Index extent(std::size_t mode) const { return shape_.at(mode); }
    Index size() const noexcept { return static_cast<Index>(values_.size()); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    Index linear_index(std::span<const Index> idx) const;
    double operator()(std::span<const Index> idx) const { return values_[linear_index(idx)]; }
    double& operator()(std::span<const Index> idx) { return values_[linear_index(idx)]; }
    double operator()(std::initializer_list<Index> idx) const;
    double& operator()(std::initializer_list<Index> idx);

    bool all_finite() const noexcept;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

Index shape_product(std::span<const Index> shape);

/// Mode-`mode` fibers as rows (zero-based mode). Row p enumerates the
/// remaining indices with the first one varying fastest.
FiberMatrix matricize(const DenseTensor& t, std::size_t mode);

/// Inverse of matricize.
DenseTensor refold(const FiberMatrix& f, const Shape& shape, std::size_t mode);

/// Y = X x_mode M for M of shape J x I_mode; the result has extent J along `mode`.
DenseTensor mode_product(const DenseTensor& t, std::size_t mode, const Eigen::MatrixXd& m);

/// Tucker model with factor k stored as r_k x I_k with orthonormal rows.
struct TuckerFactors {
    DenseTensor core;
    std::vector<Eigen::MatrixXd> factors;

    /// Throws ShapeMismatch / InvalidArgument when shapes disagree or rows are
    /// not orthonormal to `tol`.
    void validate(double tol = 1e-10) const;
};

/// core x_1 U_1^T x_2 U_2^T ... giving a tensor of shape (I_1, ..., I_m).
DenseTensor tucker_synthesize(const TuckerFactors& tf);

/// Singular values of the mode-`mode` unfolding, descending.
Eigen::VectorXd unfolding_singular_values(const DenseTensor& t, std::size_t mode);

/// Count of singular values above rel_cutoff * sigma_max.
Index numerical_rank(const Eigen::VectorXd& singular_values, double rel_cutoff = 1e-8);

} // namespace graphprop
