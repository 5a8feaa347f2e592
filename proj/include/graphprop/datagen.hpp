#pragma once

#include "graphprop/graph.hpp"
#include "graphprop/tensor.hpp"

#include <cstdint>
#include <vector>

namespace graphprop {

/// Independent sub-seed for `stream` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Synthetic multi-acquisition Tucker instance.
struct SynthSpec {
    Index I1 = 60, I2 = 60, I3 = 3;
    Index r = 5;
    Index lambda_count = 2;
    double missing_frac = 0.4;
    double core_mean = 3.0, core_std = 3.0;
    double scale_mean = 0.0, scale_std = 1.0;
    /// Rescale all acquisitions so the first has unit RMS entry.
    bool normalize = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Random r x I matrix with orthonormal rows (QR of a Gaussian matrix).
Eigen::MatrixXd random_orthonormal_rows(Index r, Index extent, std::uint64_t seed);

/// Acquisition 1 is a Tucker tensor with ranks (r, r, I3); acquisition
/// lambda > 1 has fibers F1 * diag(s_lambda), s ~ N(scale_mean, scale_std).
std::vector<DenseTensor> generate_acquisitions(const SynthSpec& s);

/// Throws InfeasibleFraction unless Lambda disjoint missing sets of
/// floor(frac * n) nodes fit and every node stays observed somewhere:
/// frac == 0, or Lambda >= 2 and Lambda * frac < 1.
void check_missing_fraction(double missing_frac, Index lambda_count);

/// Disjoint missing sets of floor(frac * n) nodes carved from one seeded permutation.
std::vector<ObservationSet> sample_observation_sets(Index n, double missing_frac, Index lambda_count,
                                                    std::uint64_t seed);

struct OverlapSpec {
    Index height = 128, width = 128;
    double area_removed_frac = 0.4;
};

struct OverlapMasks {
    Index crop = 0;                  // rows and columns removed per side
    double achieved_frac = 0.0;      // 1 - (h-c)(w-c)/(hw)
    ObservationSet first, second;    // pixel p = row + height * col
    std::vector<Index> never_observed;
};

/// c in [0, min(h,w)) minimizing |achieved - target| (smallest c on ties).
Index resolve_crop(Index height, Index width, double area_removed_frac);

/// First mask drops c rows at the top and c columns at the left; the second
/// drops c rows at the bottom and c columns at the right.
OverlapMasks partial_overlap_masks(const OverlapSpec& o);

struct LabelledGraph {
    EdgeSet edges;
    std::vector<int> labels;
};

/// Two blocks of `block_size` nodes with intra density 0.9 and cross density
/// 0.01 (exact edge counts), labels 0/1 by block; regenerated until connected.
LabelledGraph two_block_graph(Index block_size, std::uint64_t seed);

/// Co-registered smooth raster pair of shape (height, width, bands): shared
/// Gaussian blobs with random spectral signatures; the second acquisition is
/// the first with every band multiplied by a positive random gain.
std::vector<DenseTensor> smooth_raster_pair(Index height, Index width, Index bands, std::uint64_t seed);

/// Observation set of fibers as a mask tensor over the leading modes
/// (1 = observed), shape `node_shape`.
DenseTensor mask_tensor(const ObservationSet& omega, const Shape& node_shape);
ObservationSet observation_from_mask(const DenseTensor& mask);

} // namespace graphprop
