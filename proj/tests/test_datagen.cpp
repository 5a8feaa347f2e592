#include "graphprop/baselines.hpp"
#include "graphprop/datagen.hpp"
#include "graphprop/errors.hpp"
#include "graphprop/metrics.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace graphprop;

namespace {

SynthSpec desk_spec(Index r, std::uint64_t seed) {
    SynthSpec s;
    s.r = r;
    s.seed = seed;
    return s;
}

std::set<Index> missing_set(const ObservationSet& o) {
    const auto m = o.missing();
    return {m.begin(), m.end()};
}

} // namespace

TEST(Generate, SameSeedIsBitIdentical) {
    EXPECT_EQ(generate_acquisitions(desk_spec(5, 9)), generate_acquisitions(desk_spec(5, 9)));
    EXPECT_NE(generate_acquisitions(desk_spec(5, 9)), generate_acquisitions(desk_spec(5, 10)));
}

TEST(Generate, RankOneSingleBandIsOuterProduct) {
    SynthSpec s = desk_spec(1, 3);
    s.I3 = 1;
    const DenseTensor t = generate_acquisitions(s).front();
    EXPECT_EQ(numerical_rank(unfolding_singular_values(t, 0)), 1);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matricize(t, 0));
    EXPECT_LT(svd.singularValues()(1), 1e-8 * svd.singularValues()(0));
}

TEST(Generate, LaterAcquisitionsScaleFiberColumns) {
    SynthSpec s = desk_spec(5, 4);
    s.lambda_count = 3;
    s.missing_frac = 0.2;
    const auto acq = generate_acquisitions(s);
    ASSERT_EQ(acq.size(), 3u);
    const FiberMatrix f1 = matricize(acq[0], 2);
    for (std::size_t l = 1; l < 3; ++l) {
        const FiberMatrix fl = matricize(acq[l], 2);
        for (Index j = 0; j < f1.cols(); ++j) {
            // recover s_j from the largest entry, then check the whole column
            Index p;
            f1.col(j).cwiseAbs().maxCoeff(&p);
            const double sj = fl(p, j) / f1(p, j);
            EXPECT_LE((fl.col(j) - sj * f1.col(j)).norm(), 1e-12 * fl.col(j).norm() + 1e-300);
        }
    }
}

TEST(Generate, StackedTuckerRank) {
    for (Index r : {5, 30}) {
        const auto acq = generate_acquisitions(desk_spec(r, 100 + static_cast<std::uint64_t>(r)));
        const DenseTensor stacked = stack_acquisitions(acq);
        EXPECT_EQ(numerical_rank(unfolding_singular_values(stacked, 0)), r);
        EXPECT_EQ(numerical_rank(unfolding_singular_values(stacked, 1)), r);
        EXPECT_LE(numerical_rank(unfolding_singular_values(stacked, 2)), 3);
        EXPECT_LE(numerical_rank(unfolding_singular_values(stacked, 3)), 2);
    }
}

TEST(Generate, NormalizeGivesUnitRmsFirstAcquisition) {
    SynthSpec s = desk_spec(20, 5);
    s.normalize = true;
    const DenseTensor t = generate_acquisitions(s).front();
    double sq = 0.0;
    for (double v : t.values()) sq += v * v;
    EXPECT_NEAR(std::sqrt(sq / static_cast<double>(t.size())), 1.0, 1e-12);
}

TEST(Generate, InvalidSpecThrows) {
    EXPECT_THROW(generate_acquisitions(desk_spec(61, 1)), Error);
    SynthSpec s = desk_spec(5, 1);
    s.I1 = 0;
    EXPECT_THROW(generate_acquisitions(s), Error);
}

TEST(Generate, OrthonormalRows) {
    const Eigen::MatrixXd u = random_orthonormal_rows(7, 20, 3);
    EXPECT_LE((u * u.transpose() - Eigen::MatrixXd::Identity(7, 7)).norm(), 1e-12);
}

TEST(SampleObservationSets, ZeroFractionIsFull) {
    for (const auto& o : sample_observation_sets(50, 0.0, 2, 1)) EXPECT_EQ(o.observed_count(), 50);
}

TEST(SampleObservationSets, DisjointAndCovering) {
    const auto sets = sample_observation_sets(100, 0.4, 2, 7);
    ASSERT_EQ(sets.size(), 2u);
    const auto a = missing_set(sets[0]), b = missing_set(sets[1]);
    EXPECT_EQ(a.size(), 40u);
    EXPECT_EQ(b.size(), 40u);
    for (Index id : a) EXPECT_FALSE(b.count(id));
    EXPECT_TRUE(never_observed(sets).empty());
}

TEST(SampleObservationSets, InfeasibleFraction) {
    try {
        sample_observation_sets(100, 0.5, 2, 1);
        FAIL() << "expected InfeasibleFraction";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleFraction);
    }
    EXPECT_THROW(sample_observation_sets(100, 0.1, 1, 1), Error);
    EXPECT_NO_THROW(sample_observation_sets(100, 0.3, 3, 1));
    EXPECT_THROW(sample_observation_sets(100, 0.34, 3, 1), Error);
}

TEST(SampleObservationSets, DeterministicUnderSeed) {
    const auto a = sample_observation_sets(500, 0.3, 3, 11), b = sample_observation_sets(500, 0.3, 3, 11);
    for (std::size_t l = 0; l < a.size(); ++l) EXPECT_EQ(a[l].observed(), b[l].observed());
}

TEST(OverlapMasks, ZeroAreaIsFull) {
    const OverlapMasks m = partial_overlap_masks({.height = 20, .width = 30, .area_removed_frac = 0.0});
    EXPECT_EQ(m.crop, 0);
    EXPECT_EQ(m.first.observed_count(), 600);
    EXPECT_EQ(m.second.observed_count(), 600);
    EXPECT_TRUE(m.never_observed.empty());
}

TEST(OverlapMasks, FiveHundredSquareAtForty) {
    EXPECT_EQ(resolve_crop(500, 500, 0.4), 113);
    const OverlapMasks m = partial_overlap_masks({.height = 500, .width = 500, .area_removed_frac = 0.4});
    EXPECT_NEAR(m.achieved_frac, 1.0 - 387.0 * 387.0 / 250000.0, 1e-15);
}

TEST(OverlapMasks, CropIsClosestAchievable) {
    for (auto [h, w] : {std::pair<Index, Index>{128, 128}, {500, 500}, {37, 90}, {200, 150}}) {
        for (int t = 0; t <= 70; ++t) {
            const double target = t / 100.0;
            const Index c = resolve_crop(h, w, target);
            auto achieved = [&](Index cc) {
                return 1.0 - static_cast<double>((h - cc) * (w - cc)) / static_cast<double>(h * w);
            };
            EXPECT_LE(std::abs(achieved(c) - target), 1.0 / static_cast<double>(std::min(h, w)));
            for (Index cc = 0; cc < std::min(h, w); ++cc) {
                EXPECT_LE(std::abs(achieved(c) - target), std::abs(achieved(cc) - target));
            }
        }
    }
}

TEST(OverlapMasks, SidesAndNeverObservedCorners) {
    const Index h = 12, w = 15;
    const OverlapMasks m = partial_overlap_masks({.height = h, .width = w, .area_removed_frac = 0.3});
    const Index c = m.crop;
    ASSERT_GT(c, 0);
    std::vector<Index> both;
    for (Index col = 0; col < w; ++col) {
        for (Index row = 0; row < h; ++row) {
            const Index p = row + h * col;
            EXPECT_EQ(m.first.contains(p), row >= c && col >= c);
            EXPECT_EQ(m.second.contains(p), row < h - c && col < w - c);
            if (!m.first.contains(p) && !m.second.contains(p)) both.push_back(p);
        }
    }
    EXPECT_EQ(m.never_observed, both);
}

TEST(TwoBlockGraph, CountsLabelsAndConnectivity) {
    const LabelledGraph lg = two_block_graph(50, 3);
    EXPECT_EQ(lg.edges.n(), 100);
    Index intra = 0, cross = 0;
    for (const auto& [u, v] : lg.edges.edges()) ((u < 50) == (v < 50) ? intra : cross) += 1;
    EXPECT_GE(static_cast<double>(intra), 2.0 * (50.0 * 49.0 / 2.0) * 0.9);
    EXPECT_EQ(cross, 25);
    EXPECT_EQ(std::count(lg.labels.begin(), lg.labels.end(), 0), 50);
    EXPECT_EQ(std::count(lg.labels.begin(), lg.labels.end(), 1), 50);
    for (Index i = 0; i < 100; ++i) EXPECT_EQ(lg.labels[i], i < 50 ? 0 : 1);
    {
        const auto comp = connected_components(build_graph(lg.edges));
        EXPECT_EQ(*std::max_element(comp.begin(), comp.end()), 0);
    }
    EXPECT_THROW(two_block_graph(1, 0), Error);
}

TEST(SmoothRasterPair, SecondIsPositiveBandScaling) {
    const auto pair = smooth_raster_pair(16, 20, 4, 8);
    ASSERT_EQ(pair.size(), 2u);
    EXPECT_EQ(pair[0].shape(), (Shape{16, 20, 4}));
    const FiberMatrix a = matricize(pair[0], 2), b = matricize(pair[1], 2);
    for (Index j = 0; j < 4; ++j) {
        const double gain = b.col(j).dot(a.col(j)) / a.col(j).squaredNorm();
        EXPECT_GT(gain, 0.0);
        EXPECT_LE((b.col(j) - gain * a.col(j)).norm(), 1e-12 * b.col(j).norm());
    }
    EXPECT_EQ(smooth_raster_pair(16, 20, 4, 8), pair);
}

TEST(MaskTensor, RoundTrip) {
    const ObservationSet o(12, {0, 3, 4, 11});
    const DenseTensor m = mask_tensor(o, {3, 4});
    EXPECT_EQ(observation_from_mask(m).observed(), o.observed());
    EXPECT_THROW(mask_tensor(o, {5, 2}), Error);
}
