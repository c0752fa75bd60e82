#include "sgcurv/signed_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

struct BfsTree {
    std::vector<Vertex> parent;
    std::vector<std::size_t> parent_edge;
    std::vector<std::size_t> depth;
    std::vector<bool> reached;
    std::vector<Vertex> order;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

BfsTree bfs_tree(const SignedGraph& g, Vertex root, SignFilter filter) {
    const std::size_t n = g.num_vertices();
    BfsTree t{std::vector<Vertex>(n, kNone), std::vector<std::size_t>(n, kNone),
              std::vector<std::size_t>(n, 0), std::vector<bool>(n, false), {}};
    if (n == 0) return t;
    std::queue<Vertex> queue;
    queue.push(root);
    t.reached[root] = true;
    while (!queue.empty()) {
        const Vertex x = queue.front();
        queue.pop();
        t.order.push_back(x);
        for (const auto& inc : g.incident(x)) {
            if (!passes(filter, g.edge(inc.edge).sign) || t.reached[inc.neighbor]) continue;
            t.reached[inc.neighbor] = true;
            t.parent[inc.neighbor] = x;
            t.parent_edge[inc.neighbor] = inc.edge;
            t.depth[inc.neighbor] = t.depth[x] + 1;
            queue.push(inc.neighbor);
        }
    }
    return t;
}

// Edges on the tree path a -> b, closed by `closing` into a cycle.
std::vector<Edge> tree_cycle(const SignedGraph& g, const BfsTree& t, std::size_t closing) {
    const Edge& e = g.edge(closing);
    Vertex a = e.u;
    Vertex b = e.v;
    std::vector<Edge> from_a;
    std::vector<Edge> from_b;
    while (t.depth[a] > t.depth[b]) {
        from_a.push_back(g.edge(t.parent_edge[a]));
        a = t.parent[a];
    }
    while (t.depth[b] > t.depth[a]) {
        from_b.push_back(g.edge(t.parent_edge[b]));
        b = t.parent[b];
    }
    while (a != b) {
        from_a.push_back(g.edge(t.parent_edge[a]));
        a = t.parent[a];
        from_b.push_back(g.edge(t.parent_edge[b]));
        b = t.parent[b];
    }
    std::vector<Edge> cycle;
    cycle.push_back(e);
    cycle.insert(cycle.end(), from_b.begin(), from_b.end());
    cycle.insert(cycle.end(), from_a.rbegin(), from_a.rend());
    return cycle;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<std::size_t> parse_index(std::string_view tok) {
    std::size_t value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) return std::nullopt;
    return value;
}

std::optional<Sign> parse_sign(std::string_view tok) {
    if (tok == "+1" || tok == "1" || tok == "+") return Sign::positive;
    if (tok == "-1" || tok == "-") return Sign::negative;
    return std::nullopt;
}

}  // namespace

SignedGraph::SignedGraph(std::size_t num_vertices, std::vector<Edge> edges)
    : n_(num_vertices), edges_(std::move(edges)), adjacency_(num_vertices) {
    if (n_ == 0) throw InvalidGraph("graph must have at least one vertex");
    for (auto& e : edges_) {
        if (e.u >= n_ || e.v >= n_)
            throw InvalidGraph("vertex id out of range in edge (" + std::to_string(e.u) + ", " +
                               std::to_string(e.v) + ")");
        if (e.u == e.v) throw InvalidGraph("self-loop at vertex " + std::to_string(e.u));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw InvalidGraph("edge weight must be positive and finite");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v)
            throw InvalidGraph("duplicate edge (" + std::to_string(edges_[k].u) + ", " +
                               std::to_string(edges_[k].v) + ")");
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        adjacency_[edges_[k].u].push_back({edges_[k].v, k});
        adjacency_[edges_[k].v].push_back({edges_[k].u, k});
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end(),
                  [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    }
}

std::optional<std::size_t> SignedGraph::find_edge(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_) return std::nullopt;
    const auto& list = adjacency_[a];
    const auto it = std::lower_bound(list.begin(), list.end(), b,
                                     [](const Incidence& inc, Vertex x) { return inc.neighbor < x; });
    if (it == list.end() || it->neighbor != b) return std::nullopt;
    return it->edge;
}

double SignedGraph::weight(Vertex a, Vertex b, SignFilter filter) const {
    const auto idx = find_edge(a, b);
    if (!idx) return 0.0;
    const Edge& e = edges_[*idx];
    return passes(filter, e.sign) ? e.weight : 0.0;
}

bool SignedGraph::has_negative_edges() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.sign == Sign::negative; });
}

bool SignedGraph::is_complete() const noexcept {
    return edges_.size() == n_ * (n_ - 1) / 2;
}

SignedGraph parse_edge_list(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto tokens = split_ws(line);
        if (!n) {
            const auto count = tokens.size() == 1 ? parse_index(tokens[0]) : std::nullopt;
            if (!count || *count == 0)
                throw ParseError(line_no, "expected a positive vertex count");
            n = *count;
            continue;
        }
        if (tokens.size() != 3 && tokens.size() != 4)
            throw ParseError(line_no, "expected 'u v [w] s'");
        const auto u = parse_index(tokens[0]);
        const auto v = parse_index(tokens[1]);
        if (!u || !v) throw ParseError(line_no, "malformed vertex id");
        if (*u >= *n || *v >= *n) throw ParseError(line_no, "vertex id out of range");
        if (*u == *v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(*u));
        double w = 1.0;
        if (tokens.size() == 4) {
            const auto parsed = parse_real(tokens[2]);
            if (!parsed) throw ParseError(line_no, "malformed weight");
            w = *parsed;
            if (!(w > 0.0) || !std::isfinite(w))
                throw ParseError(line_no, "weight must be positive");
        }
        const auto s = parse_sign(tokens.back());
        if (!s) throw ParseError(line_no, "sign must be +1 or -1");
        edges.push_back({std::min(*u, *v), std::max(*u, *v), w, *s});
        edge_lines.push_back(line_no);
    }
    if (!n) throw ParseError(std::max<std::size_t>(line_no, 1), "missing vertex count");

    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(edges[a].u, edges[a].v, edge_lines[a]) <
               std::tie(edges[b].u, edges[b].v, edge_lines[b]);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Edge& a = edges[order[k - 1]];
        const Edge& b = edges[order[k]];
        if (a.u == b.u && a.v == b.v)
            throw ParseError(edge_lines[order[k]], "duplicate edge (" + std::to_string(b.u) +
                                                       ", " + std::to_string(b.v) + ")");
    }
    return SignedGraph(*n, std::move(edges));
}

std::string format_edge_list(const SignedGraph& g) {
    std::ostringstream out;
    out << g.num_vertices() << '\n';
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.weight);
        out << e.u << ' ' << e.v << ' ' << buf << ' ' << (e.sign == Sign::positive ? "+1" : "-1")
            << '\n';
    }
    return out.str();
}

std::vector<double> Degrees::total() const {
    std::vector<double> out(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) out[i] = plus[i] + minus[i];
    return out;
}

Degrees degrees(const SignedGraph& g) {
    Degrees d{std::vector<double>(g.num_vertices(), 0.0),
              std::vector<double>(g.num_vertices(), 0.0)};
    for (const auto& e : g.edges()) {
        auto& target = e.sign == Sign::positive ? d.plus : d.minus;
        target[e.u] += e.weight;
        target[e.v] += e.weight;
    }
    return d;
}

bool is_connected(const SignedGraph& g, SignFilter filter) {
    const auto t = bfs_tree(g, 0, filter);
    return t.order.size() == g.num_vertices();
}

std::vector<Edge> spanning_tree(const SignedGraph& g, SignFilter filter) {
    const auto t = bfs_tree(g, 0, filter);
    if (t.order.size() != g.num_vertices())
        throw PreconditionError("spanning_tree: selected subgraph is disconnected");
    std::vector<Edge> tree;
    tree.reserve(g.num_vertices() - 1);
    for (std::size_t k = 1; k < t.order.size(); ++k) tree.push_back(g.edge(t.parent_edge[t.order[k]]));
    return tree;
}

SwitchingResult switch_to_tree_positive(const SignedGraph& g, std::span<const Edge> tree,
                                        Vertex root) {
    const std::size_t n = g.num_vertices();
    if (root >= n) throw PreconditionError("switch_to_tree_positive: root out of range");
    if (tree.size() + 1 != n)
        throw PreconditionError("switch_to_tree_positive: tree must have n-1 edges");

    std::vector<Edge> tree_edges;
    std::vector<Edge> tree_only;
    for (const auto& te : tree) {
        const auto idx = g.find_edge(te.u, te.v);
        if (!idx) throw PreconditionError("switch_to_tree_positive: tree edge not in graph");
        tree_edges.push_back(g.edge(*idx));
        tree_only.push_back(g.edge(*idx));
    }
    SignedGraph tree_graph;
    try {
        tree_graph = SignedGraph(n, tree_only);
    } catch (const InvalidGraph&) {
        throw PreconditionError("switch_to_tree_positive: repeated tree edge");
    }
    const auto t = bfs_tree(tree_graph, root, SignFilter::any);
    if (t.order.size() != n)
        throw PreconditionError("switch_to_tree_positive: tree is not spanning");

    std::vector<Sign> f(n, Sign::positive);
    for (std::size_t k = 1; k < t.order.size(); ++k) {
        const Vertex x = t.order[k];
        f[x] = f[t.parent[x]] * tree_graph.edge(t.parent_edge[x]).sign;
    }
    std::vector<Edge> switched(g.edges().begin(), g.edges().end());
    for (auto& e : switched) e.sign = f[e.u] * e.sign * f[e.v];
    for (auto& e : tree_edges) e.sign = f[e.u] * e.sign * f[e.v];
    return {SignedGraph(n, std::move(switched)), std::move(f), std::move(tree_edges)};
}

BalanceVerdict balance_check(const SignedGraph& g) {
    const auto t = bfs_tree(g, 0, SignFilter::any);
    if (t.order.size() != g.num_vertices())
        throw PreconditionError("balance_check: underlying graph is disconnected");
    std::vector<Sign> color(g.num_vertices(), Sign::positive);
    for (std::size_t k = 1; k < t.order.size(); ++k) {
        const Vertex x = t.order[k];
        color[x] = color[t.parent[x]] * g.edge(t.parent_edge[x]).sign;
    }
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const Edge& e = g.edge(k);
        if (color[e.u] * e.sign != color[e.v]) {
            BalanceVerdict v;
            v.witness_cycle = tree_cycle(g, t, k);
            return v;
        }
    }
    BalanceVerdict v;
    v.balanced = true;
    std::vector<Vertex> side;
    for (Vertex x = 0; x < g.num_vertices(); ++x)
        if (color[x] == Sign::positive) side.push_back(x);
    v.bipartition = std::move(side);
    return v;
}

Sign sign_product(std::span<const Edge> cycle) noexcept {
    Sign s = Sign::positive;
    for (const auto& e : cycle) s = s * e.sign;
    return s;
}

std::vector<std::vector<Edge>> fundamental_cycles(const SignedGraph& g) {
    const auto t = bfs_tree(g, 0, SignFilter::any);
    if (t.order.size() != g.num_vertices())
        throw PreconditionError("fundamental_cycles: underlying graph is disconnected");
    std::vector<bool> in_tree(g.num_edges(), false);
    for (std::size_t k = 1; k < t.order.size(); ++k) in_tree[t.parent_edge[t.order[k]]] = true;
    std::vector<std::vector<Edge>> cycles;
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        if (!in_tree[k]) cycles.push_back(tree_cycle(g, t, k));
    return cycles;
}

std::size_t hop_diameter(const SignedGraph& g) {
    std::size_t diameter = 0;
    for (Vertex s = 0; s < g.num_vertices(); ++s) {
        const auto t = bfs_tree(g, s, SignFilter::any);
        if (t.order.size() != g.num_vertices())
            throw PreconditionError("hop_diameter: underlying graph is disconnected");
        diameter = std::max(diameter, t.depth[t.order.back()]);
    }
    return diameter;
}

std::vector<std::size_t> edge_blocks(const SignedGraph& g) {
    // Iterative Hopcroft-Tarjan over an edge stack.
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> block(g.num_edges(), kNone);
    std::vector<std::size_t> disc(n, kNone);
    std::vector<std::size_t> low(n, 0);
    std::vector<std::size_t> edge_stack;
    std::size_t timer = 0;
    std::size_t next_block = 0;

    struct Frame {
        Vertex v;
        std::size_t via_edge;
        std::size_t next;
    };
    for (Vertex start = 0; start < n; ++start) {
        if (disc[start] != kNone) continue;
        std::vector<Frame> stack{{start, kNone, 0}};
        disc[start] = low[start] = timer++;
        while (!stack.empty()) {
            Frame& fr = stack.back();
            const auto inc = g.incident(fr.v);
            if (fr.next < inc.size()) {
                const auto [w, eidx] = inc[fr.next++];
                if (eidx == fr.via_edge) continue;
                if (disc[w] == kNone) {
                    edge_stack.push_back(eidx);
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, eidx, 0});
                } else if (disc[w] < disc[fr.v]) {
                    edge_stack.push_back(eidx);
                    low[fr.v] = std::min(low[fr.v], disc[w]);
                }
                continue;
            }
            const Frame done = fr;
            stack.pop_back();
            if (stack.empty()) break;
            Frame& parent = stack.back();
            low[parent.v] = std::min(low[parent.v], low[done.v]);
            if (low[done.v] >= disc[parent.v]) {
                while (!edge_stack.empty()) {
                    const std::size_t e = edge_stack.back();
                    edge_stack.pop_back();
                    block[e] = next_block;
                    if (e == done.via_edge) break;
                }
                ++next_block;
            }
        }
    }
    return block;
}

}  // namespace sgcurv
