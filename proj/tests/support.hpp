#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.

#include "graphprop/graph.hpp"
#include "graphprop/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace gp_test {

using graphprop::Edge;
using graphprop::EdgeSet;
using graphprop::FiberMatrix;
using graphprop::Index;
using graphprop::ObservationSet;

/// Random spanning tree plus independent extra edges with probability p.
inline EdgeSet random_connected_edges(Index n, double p, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (Index i = 1; i < n; ++i) {
        std::uniform_int_distribution<Index> pick(0, i - 1);
        edges.emplace_back(order[i], order[pick(rng)]);
    }
    std::bernoulli_distribution extra(p);
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            if (extra(rng)) edges.emplace_back(u, v);
        }
    }
    return EdgeSet(n, std::move(edges));
}

/// Random observation set with `missing` unobserved nodes (at least one observed).
inline ObservationSet random_observation(Index n, Index missing, std::mt19937_64& rng) {
    missing = std::clamp<Index>(missing, 0, n - 1);
    std::vector<Index> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), Index{0});
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(static_cast<std::size_t>(n - missing));
    std::sort(ids.begin(), ids.end());
    return ObservationSet(n, ids);
}

inline Eigen::MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

inline FiberMatrix observed_rows(const FiberMatrix& full, const ObservationSet& omega) {
    FiberMatrix out(omega.observed_count(), full.cols());
    for (Index i = 0; i < omega.observed_count(); ++i) out.row(i) = full.row(omega.observed()[i]);
    return out;
}

inline Eigen::MatrixXd dense_adjacency(const EdgeSet& e) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(e.n(), e.n());
    for (const auto& [u, v] : e.edges()) a(u, v) = a(v, u) = 1.0;
    return a;
}

inline Eigen::MatrixXd dense_laplacian(const EdgeSet& e) {
    const Eigen::MatrixXd a = dense_adjacency(e);
    Eigen::MatrixXd l = -a;
    l.diagonal() = a.rowwise().sum();
    return l;
}

/// Dense reference solve of L_cc F_c = -L_co F_o, returned as a full n-row matrix.
inline FiberMatrix dense_harmonic(const EdgeSet& e, const ObservationSet& omega, const FiberMatrix& observed) {
    const Eigen::MatrixXd l = dense_laplacian(e);
    const auto& obs = omega.observed();
    const std::vector<Index> mis = omega.missing();
    const Index nc = static_cast<Index>(mis.size());
    Eigen::MatrixXd lcc(nc, nc), lco(nc, static_cast<Index>(obs.size()));
    for (Index i = 0; i < nc; ++i) {
        for (Index j = 0; j < nc; ++j) lcc(i, j) = l(mis[i], mis[j]);
        for (std::size_t j = 0; j < obs.size(); ++j) lco(i, static_cast<Index>(j)) = l(mis[i], obs[j]);
    }
    const Eigen::MatrixXd fc = lcc.fullPivLu().solve(-lco * observed);
    FiberMatrix full(e.n(), observed.cols());
    for (std::size_t j = 0; j < obs.size(); ++j) full.row(obs[j]) = observed.row(static_cast<Index>(j));
    for (Index i = 0; i < nc; ++i) full.row(mis[i]) = fc.row(i);
    return full;
}

/// O(n^2) kNN with the documented tie rule, as a directed-then-union edge set.
inline EdgeSet brute_force_knn(const FiberMatrix& f, const ObservationSet& omega, Index k) {
    const auto& obs = omega.observed();
    std::vector<Edge> edges;
    for (Index p : obs) {
        std::vector<std::pair<double, Index>> cand;
        for (Index q : obs) {
            if (q != p) cand.emplace_back((f.row(p) - f.row(q)).squaredNorm(), q);
        }
        std::sort(cand.begin(), cand.end());
        for (Index i = 0; i < k; ++i) edges.emplace_back(p, cand[i].second);
    }
    return EdgeSet(omega.n(), std::move(edges));
}

} // namespace gp_test
