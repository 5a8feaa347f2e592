#include "graphprop/graph.hpp"

#include "graphprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace graphprop {

ObservationSet::ObservationSet(Index n, std::vector<Index> observed) : n_(n), observed_(std::move(observed)) {
    if (n_ < 0) fail(ErrorKind::InvalidArgument, "negative node count");
    std::sort(observed_.begin(), observed_.end());
    for (std::size_t i = 0; i < observed_.size(); ++i) {
        if (observed_[i] < 0 || observed_[i] >= n_) {
            fail(ErrorKind::InvalidArgument, "observed id " + std::to_string(observed_[i]) + " out of range");
        }
        if (i > 0 && observed_[i] == observed_[i - 1]) {
            fail(ErrorKind::InvalidArgument, "duplicate observed id " + std::to_string(observed_[i]));
        }
    }
}

ObservationSet ObservationSet::all(Index n) {
    std::vector<Index> ids(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) ids[i] = i;
    return ObservationSet(n, std::move(ids));
}

ObservationSet ObservationSet::from_mask(const std::vector<bool>& observed) {
    std::vector<Index> ids;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (observed[i]) ids.push_back(static_cast<Index>(i));
    }
    return ObservationSet(static_cast<Index>(observed.size()), std::move(ids));
}

std::vector<Index> ObservationSet::missing() const {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(missing_count()));
    std::size_t j = 0;
    for (Index i = 0; i < n_; ++i) {
        if (j < observed_.size() && observed_[j] == i) {
            ++j;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<bool> ObservationSet::mask() const {
    std::vector<bool> m(static_cast<std::size_t>(n_), false);
    for (Index id : observed_) m[id] = true;
    return m;
}

bool ObservationSet::contains(Index id) const {
    return std::binary_search(observed_.begin(), observed_.end(), id);
}

EdgeSet::EdgeSet(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    for (auto& [u, v] : edges_) {
        if (u == v) fail(ErrorKind::InvalidArgument, "self-loop on node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_ || v >= n_) fail(ErrorKind::InvalidArgument, "edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(Index u, Index v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

SparseGraph::SparseGraph(SparseMatrix adjacency, Eigen::VectorXd degree, std::vector<Index> zero_degree)
    : adjacency_(std::move(adjacency)), degree_(std::move(degree)), zero_degree_(std::move(zero_degree)) {}

SparseMatrix SparseGraph::laplacian() const {
    SparseMatrix d(n(), n());
    d.reserve(Eigen::VectorXi::Constant(n(), 1));
    for (Index i = 0; i < n(); ++i) d.insert(i, i) = degree_[i];
    SparseMatrix l = d - adjacency_;
    l.makeCompressed();
    return l;
}

namespace {

// Observed rows gathered into a dense row-major point buffer.
struct PointCloud {
    Index count = 0;
    Index dim = 0;
    std::vector<double> coords;
    std::vector<Index> ids;

    const double* row(Index i) const { return coords.data() + i * dim; }
};

PointCloud gather_points(const FiberMatrix& features, const ObservationSet& observed, Index k) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be >= 1");
    if (observed.observed_count() < k + 1) {
        fail(ErrorKind::TooFewObserved, std::to_string(observed.observed_count()) +
                                            " observed nodes, need at least k+1 = " + std::to_string(k + 1));
    }
    const bool compact = features.rows() == observed.observed_count();
    if (!compact && features.rows() != observed.n()) {
        fail(ErrorKind::ShapeMismatch, "feature rows must equal n or the observed count");
    }
    PointCloud pc;
    pc.count = observed.observed_count();
    pc.dim = features.cols();
    pc.ids = observed.observed();
    pc.coords.resize(static_cast<std::size_t>(pc.count * pc.dim));
    for (Index i = 0; i < pc.count; ++i) {
        const Index src = compact ? i : pc.ids[i];
        for (Index c = 0; c < pc.dim; ++c) {
            const double v = features(src, c);
            if (!std::isfinite(v)) fail(ErrorKind::NonFiniteInput, "non-finite feature on observed node");
            pc.coords[i * pc.dim + c] = v;
        }
    }
    return pc;
}

inline double squared_distance(const double* a, const double* b, Index dim) {
    double s = 0.0;
    for (Index c = 0; c < dim; ++c) {
        const double d = a[c] - b[c];
        s += d * d;
    }
    return s;
}

// Bounded candidate list ordered by (distance, point index); point indices
// increase with node id, so this realizes the smaller-id tie-break.
class Neighbours {
public:
    explicit Neighbours(Index k) : k_(static_cast<std::size_t>(k)) { items_.reserve(k_ + 1); }

    bool full() const { return items_.size() == k_; }
    double worst() const { return items_.back().first; }

    void offer(double d, Index idx) {
        const std::pair<double, Index> cand{d, idx};
        if (full() && !(cand < items_.back())) return;
        items_.insert(std::upper_bound(items_.begin(), items_.end(), cand), cand);
        if (items_.size() > k_) items_.pop_back();
    }

    const std::vector<std::pair<double, Index>>& items() const { return items_; }

private:
    std::size_t k_;
    std::vector<std::pair<double, Index>> items_;
};

class KdTree {
public:
    explicit KdTree(const PointCloud& pc) : pc_(pc), perm_(static_cast<std::size_t>(pc.count)) {
        for (Index i = 0; i < pc.count; ++i) perm_[i] = i;
        nodes_.reserve(static_cast<std::size_t>(2 * pc.count / kLeafSize + 2));
        build(0, pc.count);
    }

    void query(Index self, Neighbours& out) const { search(0, pc_.row(self), self, out); }

private:
    static constexpr Index kLeafSize = 12;

    struct Node {
        Index begin, end;
        Index dim = -1;  // -1 marks a leaf
        double split = 0.0;
        Index left = -1, right = -1;
    };

    Index build(Index begin, Index end) {
        const Index id = static_cast<Index>(nodes_.size());
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeafSize) return id;

        Index best_dim = 0;
        double best_spread = -1.0;
        for (Index c = 0; c < pc_.dim; ++c) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (Index i = begin; i < end; ++i) {
                const double v = pc_.row(perm_[i])[c];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_dim = c;
            }
        }
        if (best_spread <= 0.0) return id;  // all points coincide: keep as leaf

        const Index mid = begin + (end - begin) / 2;
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                         [&](Index a, Index b) { return pc_.row(a)[best_dim] < pc_.row(b)[best_dim]; });
        const double split = pc_.row(perm_[mid])[best_dim];
        const Index left = build(begin, mid);
        const Index right = build(mid, end);
        nodes_[id].dim = best_dim;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(Index node_id, const double* q, Index self, Neighbours& out) const {
        const Node& node = nodes_[node_id];
        if (node.dim < 0) {
            for (Index i = node.begin; i < node.end; ++i) {
                const Index p = perm_[i];
                if (p == self) continue;
                out.offer(squared_distance(q, pc_.row(p), pc_.dim), p);
            }
            return;
        }
        const double diff = q[node.dim] - node.split;
        const Index near = diff < 0.0 ? node.left : node.right;
        const Index far = diff < 0.0 ? node.right : node.left;
        search(near, q, self, out);
        // <= keeps equal-distance candidates with smaller ids reachable.
        if (!out.full() || diff * diff <= out.worst()) search(far, q, self, out);
    }

    const PointCloud& pc_;
    std::vector<Index> perm_;
    std::vector<Node> nodes_;
};

EdgeSet collect_edges(const PointCloud& pc, Index n, Index k, auto&& find_neighbours) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(pc.count * k));
    for (Index i = 0; i < pc.count; ++i) {
        Neighbours nb(k);
        find_neighbours(i, nb);
        for (const auto& [d, j] : nb.items()) edges.emplace_back(pc.ids[i], pc.ids[j]);
    }
    return EdgeSet(n, std::move(edges));
}

constexpr Index kMaxTreeDim = 16;
constexpr Index kBruteBlock = 256;

void brute_force_block(const PointCloud& pc, Index qbegin, Index qend, std::vector<Neighbours>& out) {
    for (Index pbegin = 0; pbegin < pc.count; pbegin += kBruteBlock) {
        const Index pend = std::min(pc.count, pbegin + kBruteBlock);
        for (Index q = qbegin; q < qend; ++q) {
            const double* qrow = pc.row(q);
            for (Index p = pbegin; p < pend; ++p) {
                if (p != q) out[q - qbegin].offer(squared_distance(qrow, pc.row(p), pc.dim), p);
            }
        }
    }
}

EdgeSet brute_force_edges(const PointCloud& pc, Index n, Index k) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(pc.count * k));
    for (Index qbegin = 0; qbegin < pc.count; qbegin += kBruteBlock) {
        const Index qend = std::min(pc.count, qbegin + kBruteBlock);
        std::vector<Neighbours> nbs(static_cast<std::size_t>(qend - qbegin), Neighbours(k));
        brute_force_block(pc, qbegin, qend, nbs);
        for (Index q = qbegin; q < qend; ++q) {
            for (const auto& [d, j] : nbs[q - qbegin].items()) edges.emplace_back(pc.ids[q], pc.ids[j]);
        }
    }
    return EdgeSet(n, std::move(edges));
}

} // namespace

EdgeSet knn_edges(const FiberMatrix& features, const ObservationSet& observed, Index k) {
    const PointCloud pc = gather_points(features, observed, k);
    if (pc.dim > kMaxTreeDim) return brute_force_edges(pc, observed.n(), k);
    const KdTree tree(pc);
    return collect_edges(pc, observed.n(), k, [&](Index i, Neighbours& nb) { tree.query(i, nb); });
}

EdgeSet knn_edges_brute_force(const FiberMatrix& features, const ObservationSet& observed, Index k) {
    const PointCloud pc = gather_points(features, observed, k);
    return brute_force_edges(pc, observed.n(), k);
}

EdgeSet union_edges(std::span<const EdgeSet> sets) {
    if (sets.empty()) return EdgeSet{};
    const Index n = sets.front().n();
    std::vector<Edge> all;
    for (const auto& s : sets) {
        if (s.n() != n) fail(ErrorKind::ShapeMismatch, "edge sets disagree on node count");
        all.insert(all.end(), s.edges().begin(), s.edges().end());
    }
    return EdgeSet(n, std::move(all));
}

SparseGraph build_graph(const EdgeSet& e, std::span<const double> weights) {
    if (!weights.empty() && weights.size() != e.size()) {
        fail(ErrorKind::ShapeMismatch, "weights must align with edges");
    }
    const Index n = e.n();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto [u, v] = e.edges()[i];
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidArgument, "edge weights must be positive");
        trips.emplace_back(u, v, w);
        trips.emplace_back(v, u, w);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
    for (Index col = 0; col < a.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) degree[col] += it.value();
    }
    std::vector<Index> zero;
    for (Index i = 0; i < n; ++i) {
        if (degree[i] == 0.0) zero.push_back(i);
    }
    return SparseGraph(std::move(a), std::move(degree), std::move(zero));
}

std::vector<Index> connected_components(const SparseGraph& g) {
    const Index n = g.n();
    std::vector<Index> label(static_cast<std::size_t>(n), -1);
    Index next = 0;
    std::vector<Index> stack;
    for (Index s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            for (SparseMatrix::InnerIterator it(g.adjacency(), u); it; ++it) {
                if (label[it.index()] < 0) {
                    label[it.index()] = next;
                    stack.push_back(it.index());
                }
            }
        }
        ++next;
    }
    return label;
}

GraphBlocks partition_blocks(const SparseGraph& g, const ObservationSet& omega) {
    if (omega.n() != g.n()) fail(ErrorKind::ShapeMismatch, "observation set and graph disagree on n");
    GraphBlocks b;
    b.observed = omega.observed();
    b.missing = omega.missing();
    const Index no = static_cast<Index>(b.observed.size());
    const Index nc = static_cast<Index>(b.missing.size());

    // position[i] = index within its own side; side[i] = observed?
    std::vector<Index> position(static_cast<std::size_t>(g.n()));
    std::vector<bool> is_obs(static_cast<std::size_t>(g.n()), false);
    for (Index i = 0; i < no; ++i) {
        position[b.observed[i]] = i;
        is_obs[b.observed[i]] = true;
    }
    for (Index i = 0; i < nc; ++i) position[b.missing[i]] = i;

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> oo, oc, co, cc;
    const SparseMatrix& a = g.adjacency();
    for (Index col = 0; col < a.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
            const Index row = it.index();
            const Trip t(position[row], position[col], it.value());
            if (is_obs[row]) {
                (is_obs[col] ? oo : oc).push_back(t);
            } else {
                (is_obs[col] ? co : cc).push_back(t);
            }
        }
    }
    auto assemble = [](Index r, Index c, const std::vector<Trip>& trips) {
        SparseMatrix m(r, c);
        m.setFromTriplets(trips.begin(), trips.end());
        m.makeCompressed();
        return m;
    };
    b.A_oo = assemble(no, no, oo);
    b.A_oc = assemble(no, nc, oc);
    b.A_co = assemble(nc, no, co);
    b.A_cc = assemble(nc, nc, cc);

    b.D_oo.resize(no);
    for (Index i = 0; i < no; ++i) b.D_oo[i] = g.degree()[b.observed[i]];
    b.D_cc.resize(nc);
    for (Index i = 0; i < nc; ++i) b.D_cc[i] = g.degree()[b.missing[i]];

    b.L_co = -b.A_co;
    SparseMatrix dcc(nc, nc);
    dcc.reserve(Eigen::VectorXi::Constant(nc, 1));
    for (Index i = 0; i < nc; ++i) dcc.insert(i, i) = b.D_cc[i];
    b.L_cc = dcc - b.A_cc;
    b.L_cc.makeCompressed();
    return b;
}

EdgeSet read_edge_list(std::istream& is) {
    std::string line;
    Index n = -1;
    std::vector<Edge> edges;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line[0] == '#') {
            const auto pos = line.find("n=");
            if (n < 0 && pos != std::string::npos) {
                try {
                    n = std::stoll(line.substr(pos + 2));
                } catch (const std::exception&) {
                    fail(ErrorKind::Format, "bad node count in header");
                }
            }
            continue;
        }
        if (n < 0) fail(ErrorKind::Format, "edge list lacks a '# n=<N>' header");
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u >> v)) fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": expected 'u v'");
        if (u < 1 || v < 1 || u > n || v > n) {
            fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": id out of range 1.." + std::to_string(n));
        }
        if (u == v) continue;
        edges.emplace_back(u - 1, v - 1);
    }
    if (n < 0) fail(ErrorKind::Format, "edge list lacks a '# n=<N>' header");
    return EdgeSet(n, std::move(edges));
}

EdgeSet read_edge_list(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
    return read_edge_list(is);
}

void write_edge_list(std::ostream& os, const EdgeSet& e) {
    os << "# n=" << e.n() << '\n';
    for (const auto& [u, v] : e.edges()) os << (u + 1) << ' ' << (v + 1) << '\n';
}

} // namespace graphprop
