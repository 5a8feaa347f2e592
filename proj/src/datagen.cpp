#include "graphprop/datagen.hpp"

#include "graphprop/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace graphprop {

namespace {

Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void SynthSpec::validate() const {
    if (I1 < 1 || I2 < 1 || I3 < 1) fail(ErrorKind::InvalidArgument, "extents must be positive");
    if (r < 1 || r > std::min(I1, I2)) fail(ErrorKind::InvalidArgument, "rank r must lie in [1, min(I1, I2)]");
    if (lambda_count < 1) fail(ErrorKind::InvalidArgument, "need at least one acquisition");
    if (!(core_std >= 0.0) || !(scale_std >= 0.0)) fail(ErrorKind::InvalidArgument, "negative standard deviation");
    check_missing_fraction(missing_frac, lambda_count);
}

Eigen::MatrixXd random_orthonormal_rows(Index r, Index extent, std::uint64_t seed) {
    if (r < 1 || r > extent) fail(ErrorKind::InvalidArgument, "need 1 <= r <= extent");
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd g = gaussian_matrix(extent, r, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(extent, r);
    return q.transpose();
}

std::vector<DenseTensor> generate_acquisitions(const SynthSpec& s) {
    s.validate();
    TuckerFactors tf;
    tf.factors.push_back(random_orthonormal_rows(s.r, s.I1, derive_seed(s.seed, 1)));
    tf.factors.push_back(random_orthonormal_rows(s.r, s.I2, derive_seed(s.seed, 2)));
    tf.factors.push_back(random_orthonormal_rows(s.I3, s.I3, derive_seed(s.seed, 3)));

    std::mt19937_64 rng(derive_seed(s.seed, 4));
    std::normal_distribution<double> core_dist(s.core_mean, s.core_std);
    std::vector<double> core(static_cast<std::size_t>(s.r * s.r * s.I3));
    for (double& v : core) v = core_dist(rng);
    tf.core = DenseTensor({s.r, s.r, s.I3}, std::move(core));

    std::vector<DenseTensor> out;
    out.push_back(tucker_synthesize(tf));
    if (s.normalize) {
        const auto v = out.front().values();
        const double rms = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0) / v.size());
        if (rms > 0.0) {
            for (double& x : out.front().values()) x /= rms;
        }
    }

    const FiberMatrix base = matricize(out.front(), 2);
    std::normal_distribution<double> scale_dist(s.scale_mean, s.scale_std);
    for (Index lambda = 1; lambda < s.lambda_count; ++lambda) {
        Eigen::VectorXd gains(s.I3);
        for (Index c = 0; c < s.I3; ++c) gains[c] = scale_dist(rng);
        out.push_back(refold(base * gains.asDiagonal(), out.front().shape(), 2));
    }
    return out;
}

void check_missing_fraction(double missing_frac, Index lambda_count) {
    if (!(missing_frac >= 0.0) || missing_frac >= 1.0) {
        fail(ErrorKind::InfeasibleFraction, "missing fraction must lie in [0, 1)");
    }
    if (missing_frac == 0.0) return;
    if (lambda_count < 2 || !(static_cast<double>(lambda_count) * missing_frac < 1.0)) {
        fail(ErrorKind::InfeasibleFraction, "missing fraction " + std::to_string(missing_frac) + " with " +
                                                std::to_string(lambda_count) +
                                                " acquisition(s) cannot keep every fiber observed at least once");
    }
}

std::vector<ObservationSet> sample_observation_sets(Index n, double missing_frac, Index lambda_count,
                                                    std::uint64_t seed) {
    if (n < 1 || lambda_count < 1) fail(ErrorKind::InvalidArgument, "need n >= 1 and at least one acquisition");
    check_missing_fraction(missing_frac, lambda_count);
    const auto per = static_cast<Index>(std::floor(missing_frac * static_cast<double>(n)));

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<ObservationSet> out;
    for (Index lambda = 0; lambda < lambda_count; ++lambda) {
        std::vector<bool> observed(static_cast<std::size_t>(n), true);
        for (Index i = lambda * per; i < (lambda + 1) * per; ++i) observed[perm[i]] = false;
        out.push_back(ObservationSet::from_mask(observed));
    }
    return out;
}

Index resolve_crop(Index height, Index width, double area_removed_frac) {
    if (height < 1 || width < 1) fail(ErrorKind::InvalidArgument, "raster extents must be positive");
    if (!(area_removed_frac >= 0.0) || area_removed_frac > 0.7) {
        fail(ErrorKind::InvalidArgument, "area fraction must lie in [0, 0.7]");
    }
    const double area = static_cast<double>(height) * static_cast<double>(width);
    Index best = 0;
    double best_gap = std::abs(area_removed_frac);
    for (Index c = 1; c < std::min(height, width); ++c) {
        const double achieved = 1.0 - static_cast<double>(height - c) * static_cast<double>(width - c) / area;
        const double gap = std::abs(achieved - area_removed_frac);
        if (gap < best_gap) {
            best_gap = gap;
            best = c;
        }
    }
    return best;
}

OverlapMasks partial_overlap_masks(const OverlapSpec& o) {
    OverlapMasks m;
    m.crop = resolve_crop(o.height, o.width, o.area_removed_frac);
    const Index h = o.height, w = o.width, c = m.crop;
    m.achieved_frac = 1.0 - static_cast<double>(h - c) * static_cast<double>(w - c) / (static_cast<double>(h) * w);

    std::vector<bool> first(static_cast<std::size_t>(h * w)), second(static_cast<std::size_t>(h * w));
    for (Index col = 0; col < w; ++col) {
        for (Index row = 0; row < h; ++row) {
            const Index p = row + h * col;
            first[p] = row >= c && col >= c;
            second[p] = row < h - c && col < w - c;
            if (!first[p] && !second[p]) m.never_observed.push_back(p);
        }
    }
    m.first = ObservationSet::from_mask(first);
    m.second = ObservationSet::from_mask(second);
    return m;
}

LabelledGraph two_block_graph(Index block_size, std::uint64_t seed) {
    if (block_size < 2) fail(ErrorKind::InvalidArgument, "block size must be at least 2");
    const Index n = 2 * block_size;
    const auto pairs_in_block = static_cast<std::size_t>(block_size * (block_size - 1) / 2);
    const auto intra_count = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(pairs_in_block)));
    const auto cross_count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(0.01 * static_cast<double>(block_size * block_size))));

    LabelledGraph out;
    out.labels.assign(static_cast<std::size_t>(n), 0);
    for (Index i = block_size; i < n; ++i) out.labels[i] = 1;

    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, attempt));
        std::vector<Edge> edges;
        for (Index block = 0; block < 2; ++block) {
            const Index base = block * block_size;
            std::vector<Edge> pairs;
            pairs.reserve(pairs_in_block);
            for (Index u = 0; u < block_size; ++u) {
                for (Index v = u + 1; v < block_size; ++v) pairs.emplace_back(base + u, base + v);
            }
            std::shuffle(pairs.begin(), pairs.end(), rng);
            edges.insert(edges.end(), pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(intra_count));
        }
        std::vector<Edge> cross;
        for (Index u = 0; u < block_size; ++u) {
            for (Index v = block_size; v < n; ++v) cross.emplace_back(u, v);
        }
        std::shuffle(cross.begin(), cross.end(), rng);
        edges.insert(edges.end(), cross.begin(), cross.begin() + static_cast<std::ptrdiff_t>(cross_count));

        EdgeSet e(n, std::move(edges));
        const auto comp = connected_components(build_graph(e));
        if (std::all_of(comp.begin(), comp.end(), [](Index c) { return c == 0; })) {
            out.edges = std::move(e);
            return out;
        }
    }
}

std::vector<DenseTensor> smooth_raster_pair(Index height, Index width, Index bands, std::uint64_t seed) {
    if (height < 1 || width < 1 || bands < 1) fail(ErrorKind::InvalidArgument, "raster extents must be positive");
    constexpr int kBlobs = 6;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Blob {
        double cy, cx, sigma;
        Eigen::VectorXd signature;
    };
    std::vector<Blob> blobs;
    const double extent = static_cast<double>(std::max(height, width));
    for (int b = 0; b < kBlobs; ++b) {
        Blob blob;
        blob.cy = unit(rng) * static_cast<double>(height);
        blob.cx = unit(rng) * static_cast<double>(width);
        blob.sigma = (0.15 + 0.25 * unit(rng)) * extent;
        blob.signature.resize(bands);
        for (Index k = 0; k < bands; ++k) blob.signature[k] = 0.2 + 0.6 * unit(rng);
        blobs.push_back(std::move(blob));
    }
    Eigen::VectorXd offset(bands), gain(bands);
    for (Index k = 0; k < bands; ++k) offset[k] = 0.1 * unit(rng);
    for (Index k = 0; k < bands; ++k) gain[k] = 0.5 + unit(rng);

    DenseTensor first({height, width, bands});
    for (Index k = 0; k < bands; ++k) {
        for (Index col = 0; col < width; ++col) {
            for (Index row = 0; row < height; ++row) {
                double v = offset[k];
                for (const Blob& blob : blobs) {
                    const double dy = static_cast<double>(row) - blob.cy;
                    const double dx = static_cast<double>(col) - blob.cx;
                    v += blob.signature[k] * std::exp(-(dy * dy + dx * dx) / (2.0 * blob.sigma * blob.sigma));
                }
                first({row, col, k}) = v;
            }
        }
    }
    const FiberMatrix f = matricize(first, 2);
    DenseTensor second = refold(f * gain.asDiagonal(), first.shape(), 2);
    return {std::move(first), std::move(second)};
}

DenseTensor mask_tensor(const ObservationSet& omega, const Shape& node_shape) {
    if (shape_product(node_shape) != omega.n()) fail(ErrorKind::ShapeMismatch, "mask shape does not match n");
    DenseTensor m(node_shape);
    for (Index id : omega.observed()) m.values()[id] = 1.0;
    return m;
}

ObservationSet observation_from_mask(const DenseTensor& mask) {
    std::vector<bool> observed(static_cast<std::size_t>(mask.size()));
    const auto v = mask.values();
    for (Index i = 0; i < mask.size(); ++i) observed[i] = v[i] != 0.0;
    return ObservationSet::from_mask(observed);
}

} // namespace graphprop
