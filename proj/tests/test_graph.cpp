#include "graphprop/errors.hpp"
#include "graphprop/graph.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <sstream>

using namespace graphprop;

namespace {

FiberMatrix column(std::initializer_list<double> v) {
    FiberMatrix f(static_cast<Index>(v.size()), 1);
    Index i = 0;
    for (double x : v) f(i++, 0) = x;
    return f;
}

EdgeSet path3() { return EdgeSet(3, {{0, 1}, {1, 2}}); }

} // namespace

TEST(ObservationSet, ComplementAndMask) {
    const ObservationSet o(5, {3, 0});
    EXPECT_EQ(o.observed(), (std::vector<Index>{0, 3}));
    EXPECT_EQ(o.missing(), (std::vector<Index>{1, 2, 4}));
    EXPECT_TRUE(o.contains(3));
    EXPECT_FALSE(o.contains(4));
    EXPECT_EQ(ObservationSet::from_mask(o.mask()).observed(), o.observed());
    EXPECT_THROW(ObservationSet(3, {0, 0}), Error);
    EXPECT_THROW(ObservationSet(3, {3}), Error);
}

TEST(EdgeSet, CanonicalUniqueAndNoSelfLoops) {
    const EdgeSet e(4, {{2, 1}, {1, 2}, {0, 3}});
    EXPECT_EQ(e.edges(), (std::vector<Edge>{{0, 3}, {1, 2}}));
    EXPECT_TRUE(e.contains(2, 1));
    EXPECT_THROW(EdgeSet(3, {{1, 1}}), Error);
    EXPECT_THROW(EdgeSet(3, {{0, 3}}), Error);
}

TEST(KnnEdges, OneDimensionalChain) {
    const EdgeSet e = knn_edges(column({0, 1, 10}), ObservationSet::all(3), 1);
    EXPECT_EQ(e.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(KnnEdges, TwoComponents) {
    const EdgeSet e = knn_edges(column({0, 1, 10, 11}), ObservationSet::all(4), 1);
    EXPECT_EQ(e.edges(), (std::vector<Edge>{{0, 1}, {2, 3}}));
    EXPECT_EQ(e, gp_test::brute_force_knn(column({0, 1, 10, 11}), ObservationSet::all(4), 1));
}

TEST(KnnEdges, FullNeighbourhoodGivesCompleteGraph) {
    std::mt19937_64 rng(1);
    const FiberMatrix f = gp_test::random_matrix(7, 3, rng);
    EXPECT_EQ(knn_edges(f, ObservationSet::all(7), 6).size(), 21u);
}

TEST(KnnEdges, TiesGoToSmallerIdAndDuplicatesRankFirst) {
    // node 1 is equidistant from 0 and 2; node 3 duplicates node 2
    const EdgeSet e = knn_edges(column({0, 1, 2, 2}), ObservationSet::all(4), 1);
    EXPECT_TRUE(e.contains(1, 0));
    EXPECT_FALSE(e.contains(1, 2));
    EXPECT_TRUE(e.contains(2, 3));
}

TEST(KnnEdges, OnlyObservedNodesAreConnected) {
    std::mt19937_64 rng(4);
    const FiberMatrix f = gp_test::random_matrix(40, 2, rng);
    const ObservationSet o = gp_test::random_observation(40, 15, rng);
    const EdgeSet e = knn_edges(f, o, 3);
    for (const auto& [u, v] : e.edges()) {
        EXPECT_TRUE(o.contains(u));
        EXPECT_TRUE(o.contains(v));
    }
    // compact rows give the same answer as full rows
    EXPECT_EQ(knn_edges(gp_test::observed_rows(f, o), o, 3), e);
}

TEST(KnnEdges, Errors) {
    EXPECT_THROW(knn_edges(column({0, 1}), ObservationSet::all(2), 2), Error);
    EXPECT_THROW(knn_edges(column({0, std::nan(""), 2}), ObservationSet::all(3), 1), Error);
    EXPECT_THROW(knn_edges(column({0, 1, 2}), ObservationSet::all(3), 0), Error);
}

TEST(KnnEdges, TreeMatchesBruteForceOracle) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> nd(12, 500), dd(1, 20), kd(1, 10);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = nd(rng), dim = dd(rng), k = kd(rng);
        FiberMatrix f = gp_test::random_matrix(n, dim, rng);
        if (trial % 4 == 0) f = f.array().round();  // many exact ties
        const ObservationSet o = gp_test::random_observation(n, n / 3, rng);
        if (o.observed_count() < k + 1) continue;
        const EdgeSet e = knn_edges(f, o, k);
        EXPECT_EQ(e, gp_test::brute_force_knn(f, o, k)) << "n=" << n << " dim=" << dim << " k=" << k;
        EXPECT_EQ(e, knn_edges_brute_force(f, o, k));
    }
}

TEST(UnionEdges, IdempotentAndMerging) {
    const EdgeSet a(3, {{0, 1}}), b(3, {{1, 2}});
    const std::vector<EdgeSet> same{a, a};
    EXPECT_EQ(union_edges(same), a);
    const std::vector<EdgeSet> both{a, b};
    EXPECT_EQ(union_edges(both).edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
    const std::vector<EdgeSet> bad{a, EdgeSet(4)};
    EXPECT_THROW(union_edges(bad), Error);
}

TEST(UnionEdges, CoveredNodesHaveDegreeAtLeastK) {
    std::mt19937_64 rng(9);
    const Index n = 300, k = 6;
    const FiberMatrix f1 = gp_test::random_matrix(n, 3, rng);
    const FiberMatrix f2 = f1 * Eigen::Vector3d(0.5, 2.0, -1.0).asDiagonal();
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> m1(n, true), m2(n, true);
    for (Index i = 0; i < 100; ++i) m1[perm[i]] = false;
    for (Index i = 100; i < 200; ++i) m2[perm[i]] = false;
    const std::vector<EdgeSet> sets{knn_edges(f1, ObservationSet::from_mask(m1), k),
                                    knn_edges(f2, ObservationSet::from_mask(m2), k)};
    const SparseGraph g = build_graph(union_edges(sets));
    EXPECT_GE(g.degree().minCoeff(), static_cast<double>(k));
}

TEST(BuildGraph, PathDegreesAndLaplacian) {
    const SparseGraph g = build_graph(path3());
    EXPECT_EQ(g.degree(), Eigen::Vector3d(1, 2, 1));
    const Eigen::MatrixXd l = g.laplacian();
    EXPECT_EQ(l(1, 1), 2.0);
    EXPECT_EQ(l.rowwise().sum().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(g.zero_degree_nodes().empty());
}

TEST(BuildGraph, EmptyEdgeSetFlagsEveryNode) {
    const SparseGraph g = build_graph(EdgeSet(4));
    EXPECT_EQ(g.adjacency().nonZeros(), 0);
    EXPECT_EQ(g.zero_degree_nodes(), (std::vector<Index>{0, 1, 2, 3}));
}

TEST(BuildGraph, CompleteGraphSpectrum) {
    std::vector<Edge> edges;
    for (Index u = 0; u < 4; ++u) {
        for (Index v = u + 1; v < 4; ++v) edges.emplace_back(u, v);
    }
    const SparseGraph g = build_graph(EdgeSet(4, edges));
    EXPECT_EQ(g.degree(), Eigen::Vector4d::Constant(3.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(g.laplacian())};
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), 4.0, 1e-12);
}

TEST(BuildGraph, WeightsHook) {
    const std::vector<double> w{2.0, 0.5};
    const SparseGraph g = build_graph(path3(), w);
    EXPECT_EQ(g.degree(), Eigen::Vector3d(2.0, 2.5, 0.5));
    const std::vector<double> bad{1.0, -1.0};
    EXPECT_THROW(build_graph(path3(), bad), Error);
}

TEST(BuildGraph, RandomGraphsSymmetricZeroDiagonalZeroRowSums) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const EdgeSet e = gp_test::random_connected_edges(60, 0.05, rng);
        const SparseGraph g = build_graph(e);
        const Eigen::MatrixXd a = g.adjacency();
        EXPECT_EQ(a, a.transpose());
        EXPECT_EQ(a.diagonal().cwiseAbs().sum(), 0.0);
        EXPECT_LE((g.laplacian() * Eigen::VectorXd::Ones(60)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(Eigen::MatrixXd(g.laplacian()), gp_test::dense_laplacian(e));
    }
}

TEST(PartitionBlocks, AllObservedHasEmptyMissingBlock) {
    const GraphBlocks b = partition_blocks(build_graph(path3()), ObservationSet::all(3));
    EXPECT_EQ(b.L_cc.rows(), 0);
    EXPECT_EQ(b.L_cc.cols(), 0);
}

TEST(PartitionBlocks, PathWithMiddleMissing) {
    const GraphBlocks b = partition_blocks(build_graph(path3()), ObservationSet(3, {0, 2}));
    EXPECT_EQ(Eigen::MatrixXd(b.L_cc), Eigen::MatrixXd::Constant(1, 1, 2.0));
    EXPECT_EQ(Eigen::MatrixXd(b.L_co), (Eigen::MatrixXd(1, 2) << -1, -1).finished());
}

TEST(PartitionBlocks, ReassemblyReproducesLaplacian) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const EdgeSet e = gp_test::random_connected_edges(50, 0.08, rng);
        const SparseGraph g = build_graph(e);
        const ObservationSet o = gp_test::random_observation(50, 20, rng);
        const GraphBlocks b = partition_blocks(g, o);
        EXPECT_EQ(Eigen::MatrixXd(b.A_oc), Eigen::MatrixXd(b.A_co).transpose());

        std::vector<Index> order = b.observed;
        order.insert(order.end(), b.missing.begin(), b.missing.end());
        const Index no = static_cast<Index>(b.observed.size()), nc = static_cast<Index>(b.missing.size());
        Eigen::MatrixXd l(50, 50);
        l.topLeftCorner(no, no) = Eigen::MatrixXd(b.D_oo.asDiagonal()) - Eigen::MatrixXd(b.A_oo);
        l.topRightCorner(no, nc) = -Eigen::MatrixXd(b.A_oc);
        l.bottomLeftCorner(nc, no) = Eigen::MatrixXd(b.L_co);
        l.bottomRightCorner(nc, nc) = Eigen::MatrixXd(b.L_cc);
        const Eigen::MatrixXd full = gp_test::dense_laplacian(e);
        for (Index i = 0; i < 50; ++i) {
            for (Index j = 0; j < 50; ++j) EXPECT_EQ(l(i, j), full(order[i], order[j]));
        }
        EXPECT_EQ(Eigen::MatrixXd(b.L_cc.diagonal()), Eigen::MatrixXd(b.D_cc));
    }
}

TEST(ConnectedComponents, LabelsInOrderOfFirstAppearance) {
    const SparseGraph g = build_graph(EdgeSet(5, {{0, 3}, {1, 2}}));
    EXPECT_EQ(connected_components(g), (std::vector<Index>{0, 1, 1, 0, 2}));
}

TEST(EdgeListIo, RoundTripAndOneBasedIds) {
    const EdgeSet e(4, {{0, 1}, {2, 3}});
    std::stringstream ss;
    write_edge_list(ss, e);
    EXPECT_EQ(ss.str(), "# n=4\n1 2\n3 4\n");
    EXPECT_EQ(read_edge_list(ss), e);

    std::stringstream loops("# n=3\n1 1\n2 3\n\n# comment\n");
    EXPECT_EQ(read_edge_list(loops).edges(), (std::vector<Edge>{{1, 2}}));
    std::stringstream no_header("1 2\n");
    EXPECT_THROW(read_edge_list(no_header), Error);
    std::stringstream out_of_range("# n=2\n1 3\n");
    EXPECT_THROW(read_edge_list(out_of_range), Error);
}
