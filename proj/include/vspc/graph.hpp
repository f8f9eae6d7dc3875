#pragma once
// Undirected simple graphs on at most 64 nodes, one adjacency bitmask row per
// node. Cheap to copy, cheap to hash, and small enough that exhaustive
// enumeration (labeled trees via Pruefer sequences, connected graphs via edge
// masks) stays practical.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vspc {

inline constexpr int kMaxNodes = 64;

/** Sentinel hopcount between nodes in different components. */
inline constexpr int kUnreachable = -1;

class Graph {
public:
    Graph() = default;

    explicit Graph(int n) : adj_(checked_n(n), 0) {}

    static Graph from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
        Graph g(n);
        for (auto [u, v] : edges) g.add_link(u, v);
        return g;
    }

    static Graph complete(int n) {
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_link(i, j);
        return g;
    }

    /** Star with node 0 as the center. */
    static Graph star(int n) {
        Graph g(n);
        for (int j = 1; j < n; ++j) g.add_link(0, j);
        return g;
    }

    static Graph path(int n) {
        Graph g(n);
        for (int i = 0; i + 1 < n; ++i) g.add_link(i, i + 1);
        return g;
    }

    static Graph cycle(int n) {
        if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
        Graph g = path(n);
        g.add_link(n - 1, 0);
        return g;
    }

    int n() const { return static_cast<int>(adj_.size()); }

    bool has_link(int u, int v) const {
        check_node(u); check_node(v);
        return adj_[static_cast<size_t>(u)] >> v & 1u;
    }

    int degree(int i) const {
        check_node(i);
        return std::popcount(adj_[static_cast<size_t>(i)]);
    }

    int link_count() const {
        int s = 0;
        for (std::uint64_t row : adj_) s += std::popcount(row);
        return s / 2;
    }

    /** Bitmask of neighbors of i. */
    std::uint64_t neighbors(int i) const {
        check_node(i);
        return adj_[static_cast<size_t>(i)];
    }

    /** The raw rows double as the canonical cache key for this graph. */
    const std::vector<std::uint64_t>& rows() const { return adj_; }

    void add_link(int u, int v) {
        check_pair(u, v);
        adj_[static_cast<size_t>(u)] |= std::uint64_t{1} << v;
        adj_[static_cast<size_t>(v)] |= std::uint64_t{1} << u;
    }

    void remove_link(int u, int v) {
        check_pair(u, v);
        adj_[static_cast<size_t>(u)] &= ~(std::uint64_t{1} << v);
        adj_[static_cast<size_t>(v)] &= ~(std::uint64_t{1} << u);
    }

    Graph with_link(int u, int v) const {
        Graph g = *this;
        g.add_link(u, v);
        return g;
    }

    Graph without_link(int u, int v) const {
        Graph g = *this;
        g.remove_link(u, v);
        return g;
    }

    std::vector<std::pair<int, int>> links() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n(); ++i) {
            std::uint64_t m = adj_[static_cast<size_t>(i)] >> (i + 1) << (i + 1);
            while (m) {
                int j = std::countr_zero(m);
                out.emplace_back(i, j);
                m &= m - 1;
            }
        }
        return out;
    }

    bool operator==(const Graph& o) const { return adj_ == o.adj_; }
    bool operator!=(const Graph& o) const { return adj_ != o.adj_; }

private:
    static int checked_n(int n) {
        if (n < 1 || n > kMaxNodes)
            throw std::invalid_argument("node count must be in [1, " + std::to_string(kMaxNodes) + "]");
        return n;
    }
    void check_node(int i) const {
        if (i < 0 || i >= n()) throw std::invalid_argument("node index out of range");
    }
    void check_pair(int u, int v) const {
        check_node(u); check_node(v);
        if (u == v) throw std::invalid_argument("self-loops are not allowed");
    }

    std::vector<std::uint64_t> adj_;
};

struct RowsHash {
    size_t operator()(const std::vector<std::uint64_t>& rows) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t w : rows) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

/** Single-source hopcount summary; reached < n means some nodes are unreachable. */
struct HopRow {
    long long sum = 0;  // sum of finite hopcounts from the source
    int reached = 1;    // nodes reachable from the source, including itself
    int ecc = 0;        // eccentricity over the reachable set
};

inline HopRow hop_row(const Graph& g, int src) {
    const auto& adj = g.rows();
    HopRow r;
    std::uint64_t visited = std::uint64_t{1} << src;
    std::uint64_t frontier = visited;
    int dist = 0;
    while (frontier) {
        ++dist;
        std::uint64_t next = 0;
        std::uint64_t m = frontier;
        while (m) {
            int u = std::countr_zero(m);
            next |= adj[static_cast<size_t>(u)];
            m &= m - 1;
        }
        next &= ~visited;
        if (!next) break;
        visited |= next;
        int c = std::popcount(next);
        r.sum += static_cast<long long>(dist) * c;
        r.reached += c;
        r.ecc = dist;
        frontier = next;
    }
    return r;
}

/** Full pairwise hopcount table; kUnreachable marks separated pairs. */
class HopcountTable {
public:
    explicit HopcountTable(const Graph& g) : n_(g.n()), d_(static_cast<size_t>(n_) * n_, kUnreachable) {
        const auto& adj = g.rows();
        for (int s = 0; s < n_; ++s) {
            at(s, s) = 0;
            std::uint64_t visited = std::uint64_t{1} << s;
            std::uint64_t frontier = visited;
            int dist = 0;
            while (frontier) {
                ++dist;
                std::uint64_t next = 0;
                std::uint64_t m = frontier;
                while (m) {
                    int u = std::countr_zero(m);
                    next |= adj[static_cast<size_t>(u)];
                    m &= m - 1;
                }
                next &= ~visited;
                visited |= next;
                std::uint64_t mm = next;
                while (mm) {
                    int v = std::countr_zero(mm);
                    at(s, v) = dist;
                    mm &= mm - 1;
                }
                frontier = next;
            }
        }
    }

    int n() const { return n_; }

    int operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }

    /** Sum of row i; false if some node is unreachable from i. */
    std::pair<long long, bool> row_sum(int i) const {
        long long s = 0;
        for (int j = 0; j < n_; ++j) {
            int d = (*this)(i, j);
            if (d == kUnreachable) return {0, false};
            s += d;
        }
        return {s, true};
    }

    /** Sum over all ordered pairs; false if the graph is disconnected. */
    std::pair<long long, bool> total() const {
        long long s = 0;
        for (int i = 0; i < n_; ++i) {
            auto [row, ok] = row_sum(i);
            if (!ok) return {0, false};
            s += row;
        }
        return {s, true};
    }

private:
    int& at(int i, int j) { return d_[static_cast<size_t>(i) * n_ + j]; }
    int n_;
    std::vector<int> d_;
};

inline HopcountTable hopcounts(const Graph& g) { return HopcountTable(g); }

inline bool is_connected(const Graph& g) { return hop_row(g, 0).reached == g.n(); }

inline bool is_tree(const Graph& g) {
    return g.link_count() == g.n() - 1 && is_connected(g);
}

/** Path P_n up to relabeling: connected with degree profile 1,1,2,...,2. */
inline bool is_path_graph(const Graph& g) {
    if (g.n() == 1) return true;
    int ones = 0;
    for (int i = 0; i < g.n(); ++i) {
        int d = g.degree(i);
        if (d == 1)
            ++ones;
        else if (d != 2)
            return false;
    }
    return ones == 2 && is_connected(g);
}

/** Star K_{1,n-1} up to relabeling: one hub joined to n-1 leaves. */
inline bool is_star_graph(const Graph& g) {
    if (g.n() < 2) return g.n() == 1;
    if (g.link_count() != g.n() - 1) return false;
    int hubs = 0;
    for (int i = 0; i < g.n(); ++i) {
        int d = g.degree(i);
        if (d == g.n() - 1)
            ++hubs;
        else if (d != 1)
            return false;
    }
    return g.n() == 2 ? hubs == 2 : hubs == 1;
}

inline bool is_regular_graph(const Graph& g) {
    for (int i = 1; i < g.n(); ++i)
        if (g.degree(i) != g.degree(0)) return false;
    return true;
}

/** Largest hopcount over all pairs, or kUnreachable for disconnected graphs. */
inline int diameter(const Graph& g) {
    int best = 0;
    for (int s = 0; s < g.n(); ++s) {
        HopRow r = hop_row(g, s);
        if (r.reached != g.n()) return kUnreachable;
        if (r.ecc > best) best = r.ecc;
    }
    return best;
}

/**
 * Largest adjacency eigenvalue, by power iteration on A + I (the shift keeps
 * bipartite +/- pairs from stalling the iteration; it is subtracted from the
 * Rayleigh quotient at the end). Deterministic all-ones start. The residual
 * |(A+I)x - rho x|_2 bounds the eigenvalue error for symmetric matrices, so
 * the stop test delivers an absolute tolerance on the returned value.
 */
inline double spectral_radius(const Graph& g, double tol = 1e-10, int max_iter = 100000) {
    const auto& adj = g.rows();
    const int n = g.n();
    std::vector<double> x(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(static_cast<size_t>(n));
    double rho = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = x[static_cast<size_t>(i)];
            std::uint64_t m = adj[static_cast<size_t>(i)];
            while (m) {
                int j = std::countr_zero(m);
                s += x[static_cast<size_t>(j)];
                m &= m - 1;
            }
            y[static_cast<size_t>(i)] = s;
        }
        double xy = 0, res2 = 0;
        for (int i = 0; i < n; ++i) xy += x[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        rho = xy;  // x is unit length
        for (int i = 0; i < n; ++i) {
            double r = y[static_cast<size_t>(i)] - rho * x[static_cast<size_t>(i)];
            res2 += r * r;
        }
        if (std::sqrt(res2) < tol * 0.9) return rho - 1.0;
        double norm = 0;
        for (double t : y) norm += t * t;
        norm = std::sqrt(norm);
        if (norm == 0) return 0.0;  // cannot happen for A + I, kept as a guard
        for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] / norm;
    }
    throw std::runtime_error("spectral_radius: power iteration did not converge after " +
                             std::to_string(max_iter) + " iterations");
}

// --- exhaustive enumeration -------------------------------------------------

/** Decode a Pruefer sequence (n-2 entries in [0,n)) into its labeled tree. */
inline Graph prufer_decode(int n, const std::vector<int>& seq) {
    if (n < 2 || static_cast<int>(seq.size()) != n - 2)
        throw std::invalid_argument("prufer_decode: sequence must have n-2 entries");
    std::vector<int> deg(static_cast<size_t>(n), 1);
    for (int s : seq) {
        if (s < 0 || s >= n) throw std::invalid_argument("prufer_decode: entry out of range");
        ++deg[static_cast<size_t>(s)];
    }
    Graph g(n);
    for (int s : seq) {
        int leaf = 0;
        while (deg[static_cast<size_t>(leaf)] != 1) ++leaf;
        g.add_link(leaf, s);
        deg[static_cast<size_t>(leaf)] = 0;
        --deg[static_cast<size_t>(s)];
    }
    int a = -1, b = -1;
    for (int i = 0; i < n; ++i)
        if (deg[static_cast<size_t>(i)] == 1) (a < 0 ? a : b) = i;
    g.add_link(a, b);
    return g;
}

/** Inverse of prufer_decode (repeatedly strips the smallest leaf). */
inline std::vector<int> prufer_encode(const Graph& tree) {
    const int n = tree.n();
    if (!is_tree(tree)) throw std::invalid_argument("prufer_encode: input is not a tree");
    std::vector<int> seq;
    std::vector<std::uint64_t> adj = tree.rows();
    std::vector<int> deg(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) deg[static_cast<size_t>(i)] = std::popcount(adj[static_cast<size_t>(i)]);
    for (int step = 0; step < n - 2; ++step) {
        int leaf = 0;
        while (deg[static_cast<size_t>(leaf)] != 1) ++leaf;
        int nb = std::countr_zero(adj[static_cast<size_t>(leaf)]);
        seq.push_back(nb);
        adj[static_cast<size_t>(nb)] &= ~(std::uint64_t{1} << leaf);
        adj[static_cast<size_t>(leaf)] = 0;
        deg[static_cast<size_t>(leaf)] = 0;
        --deg[static_cast<size_t>(nb)];
    }
    return seq;
}

/**
 * Visit every labeled tree on n nodes exactly once (n^(n-2) of them),
 * in lexicographic Pruefer-sequence order.
 */
template <class Visit>
void for_each_tree(int n, Visit&& visit) {
    if (n < 2 || n > 10) throw std::invalid_argument("for_each_tree: n must be in [2, 10]");
    if (n == 2) {
        visit(Graph::path(2));
        return;
    }
    std::vector<int> seq(static_cast<size_t>(n - 2), 0);
    while (true) {
        visit(prufer_decode(n, seq));
        int k = n - 3;
        while (k >= 0 && seq[static_cast<size_t>(k)] == n - 1) seq[static_cast<size_t>(k--)] = 0;
        if (k < 0) break;
        ++seq[static_cast<size_t>(k)];
    }
}

inline std::vector<Graph> all_trees(int n) {
    std::vector<Graph> out;
    for_each_tree(n, [&](const Graph& g) { out.push_back(g); });
    return out;
}

/** Index of pair (i, j), i < j, in lexicographic pair order. */
inline int pair_index(int n, int i, int j) {
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

/** Build the graph whose edge set is the given bit mask over lexicographic pairs (n <= 11). */
inline Graph graph_from_pair_mask(int n, std::uint64_t mask) {
    if (n > 11) throw std::invalid_argument("graph_from_pair_mask: pair mask only covers n <= 11");
    Graph g(n);
    int b = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++b)
            if (mask >> b & 1u) g.add_link(i, j);
    return g;
}

/**
 * Visit every connected labeled graph on n nodes exactly once, in ascending
 * edge-mask order. 2 <= n <= 7 keeps the scan to at most 2^21 masks.
 */
template <class Visit>
void for_each_connected_graph(int n, Visit&& visit) {
    if (n < 2 || n > 7) throw std::invalid_argument("for_each_connected_graph: n must be in [2, 7]");
    const int bits = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        Graph g = graph_from_pair_mask(n, mask);
        if (is_connected(g)) visit(g);
    }
}

inline std::vector<Graph> all_connected_graphs(int n) {
    std::vector<Graph> out;
    for_each_connected_graph(n, [&](const Graph& g) { out.push_back(g); });
    return out;
}

}  // namespace vspc
