#pragma once

#include "graphprop/tensor.hpp"

#include <Eigen/SparseCore>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace graphprop {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Fully observed node ids of one acquisition (zero-based, strictly increasing).
class ObservationSet {
public:
    ObservationSet() = default;
    /// Sorts and validates `observed`; duplicates or out-of-range ids throw.
    ObservationSet(Index n, std::vector<Index> observed);

    static ObservationSet all(Index n);
    static ObservationSet from_mask(const std::vector<bool>& observed);

    Index n() const noexcept { return n_; }
    const std::vector<Index>& observed() const noexcept { return observed_; }
    Index observed_count() const noexcept { return static_cast<Index>(observed_.size()); }
    Index missing_count() const noexcept { return n_ - observed_count(); }

    /// Complement {0..n-1} \ observed, increasing.
    std::vector<Index> missing() const;
    std::vector<bool> mask() const;
    bool contains(Index id) const;

private:
    Index n_ = 0;
    std::vector<Index> observed_;
};

using Edge = std::pair<Index, Index>;

/// Undirected edges stored canonically as (min, max), sorted and unique.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(Index n) : n_(n) {}
    /// Canonicalizes the pairs; self-loops and out-of-range endpoints throw.
    EdgeSet(Index n, std::vector<Edge> edges);

    Index n() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool contains(Index u, Index v) const;

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    Index n_ = 0;
    std::vector<Edge> edges_;
};

/// Symmetric adjacency without self-loops plus its degree vector.
class SparseGraph {
public:
    SparseGraph() = default;
    SparseGraph(SparseMatrix adjacency, Eigen::VectorXd degree, std::vector<Index> zero_degree);

    Index n() const noexcept { return adjacency_.rows(); }
    const SparseMatrix& adjacency() const noexcept { return adjacency_; }
    const Eigen::VectorXd& degree() const noexcept { return degree_; }
    const std::vector<Index>& zero_degree_nodes() const noexcept { return zero_degree_; }
    Index edge_count() const noexcept { return adjacency_.nonZeros() / 2; }

    /// L = D - A, assembled on each call.
    SparseMatrix laplacian() const;

private:
    SparseMatrix adjacency_;
    Eigen::VectorXd degree_;
    std::vector<Index> zero_degree_;
};

/// Undirected kNN edges among the observed rows of `features`.
///
/// `features` either has one row per node (n rows, unobserved rows ignored)
/// or one row per observed node in increasing id order. Distances are
/// Euclidean; ties resolve to the smaller node id and a node is never its own
/// neighbour. Each directed kNN relation contributes one undirected edge.
EdgeSet knn_edges(const FiberMatrix& features, const ObservationSet& observed, Index k);

/// Same contract as knn_edges, always by exhaustive search.
EdgeSet knn_edges_brute_force(const FiberMatrix& features, const ObservationSet& observed, Index k);

EdgeSet union_edges(std::span<const EdgeSet> sets);

/// Unweighted adjacency by default; `weights`, if given, is aligned with
/// e.edges() and must be positive.
SparseGraph build_graph(const EdgeSet& e, std::span<const double> weights = {});

/// Component label per node (labels are 0.., in order of first appearance).
std::vector<Index> connected_components(const SparseGraph& g);

/// Graph matrices split by (observed, missing) with each side in increasing id order.
struct GraphBlocks {
    std::vector<Index> observed;
    std::vector<Index> missing;
    SparseMatrix A_oo, A_oc, A_co, A_cc;
    SparseMatrix L_co, L_cc;
    Eigen::VectorXd D_oo, D_cc;
};

GraphBlocks partition_blocks(const SparseGraph& g, const ObservationSet& omega);

// Edge list text format: "# n=<N>" header, then one "u v" pair per line
// with 1-based ids. Further '#' lines and blank lines are ignored.
EdgeSet read_edge_list(std::istream& is);
EdgeSet read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& os, const EdgeSet& e);

} // namespace graphprop
