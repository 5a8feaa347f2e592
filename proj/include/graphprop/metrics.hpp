#pragma once

#include "graphprop/graph.hpp"
#include "graphprop/tensor.hpp"

#include <optional>
#include <span>
#include <vector>

namespace graphprop {

/// Per-acquisition estimation errors W = F0 - F_hat over the missing rows that
/// were observed in at least one acquisition.
struct ErrorField {
    Index channels = 0;
    std::vector<Eigen::MatrixXd> blocks;   // one (rows x channels) block per acquisition
    std::vector<Index> excluded;           // never-observed node ids left out

    Index entry_count() const;             // channels * total rows
    Index row_count() const;
};

/// Builds the field from full n-row truths/estimates. `excluded` ids are
/// dropped from every acquisition.
ErrorField make_error_field(std::span<const FiberMatrix> truth, std::span<const FiberMatrix> estimate,
                            std::span<const ObservationSet> omegas, const std::vector<Index>& excluded);

/// Nodes missing from every acquisition.
std::vector<Index> never_observed(std::span<const ObservationSet> omegas);

double mse(const ErrorField& e);

enum class RmseForm {
    RootMean,  // sqrt(||W||_F^2 / N)
    Literal,   // ||W||_F / N, the printed form kept for reproduction studies
};
double rmse(const ErrorField& e, RmseForm form = RmseForm::RootMean);

double mae(const ErrorField& e);

enum class PsnrVariant {
    MaxError,  // 10 log10(||w||_inf / (||w||_2^2 / N_band)) per band
    Standard,  // 10 log10(peak^2 / band MSE)
};

/// Band-averaged PSNR. Bands with zero error give +inf and are dropped from
/// the mean (with a warning); +inf is returned when every band is exact.
/// The standard variant requires `peak`.
double mpsnr(const ErrorField& e, PsnrVariant variant = PsnrVariant::MaxError, std::optional<double> peak = {});

/// Fraction of `evaluated` ids whose predicted label equals the true label.
double accuracy(std::span<const int> predicted, std::span<const int> truth, std::span<const Index> evaluated);

} // namespace graphprop
