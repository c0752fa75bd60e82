#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgcurv {

using Vertex = std::size_t;

enum class Sign : int { negative = -1, positive = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign operator*(Sign a, Sign b) noexcept {
    return a == b ? Sign::positive : Sign::negative;
}

/// Undirected weighted signed edge, stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double weight = 1.0;
    Sign sign = Sign::positive;

    bool operator==(const Edge&) const = default;
};

/// Which edges a traversal or matrix builder looks at.
enum class SignFilter { any, positive, negative };

constexpr bool passes(SignFilter f, Sign s) noexcept {
    return f == SignFilter::any || (f == SignFilter::positive) == (s == Sign::positive);
}

/// Simple undirected graph with positive weights and a ±1 signature.
///
/// Construction validates the edge list (ids in range, no self-loops, no
/// duplicate pairs, weights > 0) and normalizes it to u < v in lexicographic
/// order. Instances are immutable afterwards.
class SignedGraph {
public:
    struct Incidence {
        Vertex neighbor;
        std::size_t edge;
    };

    SignedGraph() = default;
    SignedGraph(std::size_t num_vertices, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t index) const { return edges_.at(index); }

    /// Incident edges of `v`, ascending by neighbor id.
    std::span<const Incidence> incident(Vertex v) const { return adjacency_.at(v); }

    std::optional<std::size_t> find_edge(Vertex a, Vertex b) const;

    /// w_ab restricted to the filter and extended by zero off the edge set.
    double weight(Vertex a, Vertex b, SignFilter filter = SignFilter::any) const;

    bool has_negative_edges() const noexcept;
    bool is_complete() const noexcept;

    bool operator==(const SignedGraph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

/// Parses the edge-list text format: first non-comment line is the vertex
/// count, then one `u v [w] s` line per edge with s in {+1, -1}. `#` starts
/// a comment. Throws ParseError carrying the offending line number.
SignedGraph parse_edge_list(std::string_view text);

/// Inverse of parse_edge_list (weights printed with 17 significant digits).
std::string format_edge_list(const SignedGraph& g);

struct Degrees {
    std::vector<double> plus;
    std::vector<double> minus;

    std::vector<double> total() const;
};

Degrees degrees(const SignedGraph& g);

bool is_connected(const SignedGraph& g, SignFilter filter = SignFilter::any);
inline bool is_positive_connected(const SignedGraph& g) {
    return is_connected(g, SignFilter::positive);
}
inline bool is_negative_connected(const SignedGraph& g) {
    return is_connected(g, SignFilter::negative);
}

/// BFS spanning tree from vertex 0 over edges passing `filter`, neighbors
/// visited in ascending order. Throws PreconditionError when disconnected.
std::vector<Edge> spanning_tree(const SignedGraph& g, SignFilter filter = SignFilter::any);

struct SwitchingResult {
    SignedGraph graph;
    std::vector<Sign> switch_fn;
    std::vector<Edge> tree_edges;
};

/// Switches the signature by f(i) = sign product along the tree path
/// root -> i, which makes every tree edge positive.
SwitchingResult switch_to_tree_positive(const SignedGraph& g, std::span<const Edge> tree,
                                        Vertex root = 0);

struct BalanceVerdict {
    bool balanced = false;
    /// Harary side V1 (contains vertex 0), present iff balanced.
    std::optional<std::vector<Vertex>> bipartition;
    /// A cycle with negative sign product, present iff unbalanced.
    std::optional<std::vector<Edge>> witness_cycle;
};

BalanceVerdict balance_check(const SignedGraph& g);

/// Product of the signs of `cycle`.
Sign sign_product(std::span<const Edge> cycle) noexcept;

/// Fundamental cycle basis with respect to spanning_tree(g): one cycle per
/// non-tree edge, given as its edge list.
std::vector<std::vector<Edge>> fundamental_cycles(const SignedGraph& g);

/// Unweighted eccentricity maximum over the underlying graph.
std::size_t hop_diameter(const SignedGraph& g);

/// Biconnected-block id of every edge (indexed like g.edges()).
std::vector<std::size_t> edge_blocks(const SignedGraph& g);

}  // namespace sgcurv
