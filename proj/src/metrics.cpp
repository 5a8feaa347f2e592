#include "graphprop/metrics.hpp"

#include "graphprop/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphprop {

Index ErrorField::row_count() const {
    Index rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    return rows;
}

Index ErrorField::entry_count() const { return row_count() * channels; }

std::vector<Index> never_observed(std::span<const ObservationSet> omegas) {
    if (omegas.empty()) return {};
    const Index n = omegas.front().n();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const auto& o : omegas) {
        for (Index id : o.observed()) seen[id] = true;
    }
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i) {
        if (!seen[i]) out.push_back(i);
    }
    return out;
}

ErrorField make_error_field(std::span<const FiberMatrix> truth, std::span<const FiberMatrix> estimate,
                            std::span<const ObservationSet> omegas, const std::vector<Index>& excluded) {
    if (truth.size() != estimate.size() || truth.size() != omegas.size() || truth.empty()) {
        fail(ErrorKind::ShapeMismatch, "truth, estimate and observation lists must align");
    }
    ErrorField e;
    e.channels = truth.front().cols();
    e.excluded = excluded;
    std::sort(e.excluded.begin(), e.excluded.end());
    for (std::size_t l = 0; l < truth.size(); ++l) {
        if (truth[l].rows() != omegas[l].n() || estimate[l].rows() != omegas[l].n() ||
            truth[l].cols() != e.channels || estimate[l].cols() != e.channels) {
            fail(ErrorKind::ShapeMismatch, "fiber matrices must be n x channels");
        }
        std::vector<Index> rows;
        for (Index id : omegas[l].missing()) {
            if (!std::binary_search(e.excluded.begin(), e.excluded.end(), id)) rows.push_back(id);
        }
        Eigen::MatrixXd block(static_cast<Index>(rows.size()), e.channels);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            block.row(static_cast<Index>(i)) = truth[l].row(rows[i]) - estimate[l].row(rows[i]);
        }
        e.blocks.push_back(std::move(block));
    }
    return e;
}

namespace {

Index require_entries(const ErrorField& e) {
    const Index n = e.entry_count();
    if (n == 0) fail(ErrorKind::NoMissingEntries, "no missing entries to evaluate");
    return n;
}

double squared_sum(const ErrorField& e) {
    double s = 0.0;
    for (const auto& b : e.blocks) s += b.squaredNorm();
    return s;
}

} // namespace

double mse(const ErrorField& e) {
    const Index n = require_entries(e);
    return squared_sum(e) / static_cast<double>(n);
}

double rmse(const ErrorField& e, RmseForm form) {
    const Index n = require_entries(e);
    const double ss = squared_sum(e);
    if (form == RmseForm::Literal) return std::sqrt(ss) / static_cast<double>(n);
    return std::sqrt(ss / static_cast<double>(n));
}

double mae(const ErrorField& e) {
    const Index n = require_entries(e);
    double s = 0.0;
    for (const auto& b : e.blocks) s += b.cwiseAbs().sum();
    return s / static_cast<double>(n);
}

double mpsnr(const ErrorField& e, PsnrVariant variant, std::optional<double> peak) {
    require_entries(e);
    if (variant == PsnrVariant::Standard && !peak) {
        fail(ErrorKind::InvalidArgument, "standard PSNR needs a peak value");
    }
    const auto rows = static_cast<double>(e.row_count());
    double total = 0.0;
    Index finite_bands = 0;
    for (Index band = 0; band < e.channels; ++band) {
        double linf = 0.0, l2sq = 0.0;
        for (const auto& b : e.blocks) {
            if (b.rows() == 0) continue;
            linf = std::max(linf, b.col(band).cwiseAbs().maxCoeff());
            l2sq += b.col(band).squaredNorm();
        }
        if (l2sq == 0.0) {
            spdlog::warn("band {} has zero error; PSNR is +inf and the band is left out of the mean", band);
            continue;
        }
        const double band_mse = l2sq / rows;
        const double ratio = variant == PsnrVariant::MaxError ? linf / band_mse : (*peak) * (*peak) / band_mse;
        total += 10.0 * std::log10(ratio);
        ++finite_bands;
    }
    if (finite_bands == 0) return std::numeric_limits<double>::infinity();
    return total / static_cast<double>(finite_bands);
}

double accuracy(std::span<const int> predicted, std::span<const int> truth, std::span<const Index> evaluated) {
    if (predicted.size() != truth.size()) fail(ErrorKind::ShapeMismatch, "label lists must align");
    if (evaluated.empty()) fail(ErrorKind::InvalidArgument, "empty evaluation set");
    Index correct = 0;
    for (Index id : evaluated) {
        if (id < 0 || static_cast<std::size_t>(id) >= truth.size()) fail(ErrorKind::InvalidArgument, "id out of range");
        if (predicted[id] == truth[id]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(evaluated.size());
}

} // namespace graphprop
