#include "sgcurv/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

constexpr int kMaxPivots = 10000;
constexpr double kMassTol = 1e-12;

struct Cell {
    Index row;
    Index col;
    double flow;
};

std::vector<Index> support(const Vector& p) {
    std::vector<Index> s;
    for (Index k = 0; k < p.size(); ++k)
        if (p(k) > 0.0) s.push_back(k);
    return s;
}

void check_marginals(const Matrix& cost, const Vector& mu, const Vector& nu) {
    if (cost.rows() != cost.cols() || mu.size() != cost.rows() || nu.size() != cost.rows())
        throw PreconditionError("w1: cost and marginals have mismatched sizes");
    if (!cost.allFinite()) throw PreconditionError("w1: cost has non-finite entries");
    if (mu.minCoeff() < 0.0 || nu.minCoeff() < 0.0)
        throw PreconditionError("w1: marginals must be nonnegative");
    if (std::abs(mu.sum() - 1.0) > kMassTol || std::abs(nu.sum() - 1.0) > kMassTol)
        throw PreconditionError("w1: marginal mismatch, masses " + std::to_string(mu.sum()) +
                                " and " + std::to_string(nu.sum()));
}

// Node ids of the bipartite basis tree: rows are 0..m-1, columns m..m+k-1.
struct BasisTree {
    Index m;
    Index k;
    std::vector<std::vector<std::size_t>> adj;  // node -> basis cell indices

    BasisTree(Index rows, Index cols, const std::vector<Cell>& basis)
        : m(rows), k(cols), adj(static_cast<std::size_t>(rows + cols)) {
        for (std::size_t c = 0; c < basis.size(); ++c) {
            adj[static_cast<std::size_t>(basis[c].row)].push_back(c);
            adj[static_cast<std::size_t>(m + basis[c].col)].push_back(c);
        }
    }

    Index other(const Cell& c, Index node) const { return node == c.row ? m + c.col : c.row; }
};

void potentials(const std::vector<Cell>& basis, const Matrix& c, Index m, Index k, Vector& u,
                Vector& v) {
    const BasisTree tree(m, k, basis);
    u = Vector::Constant(m, std::numeric_limits<double>::quiet_NaN());
    v = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
    u(0) = 0.0;
    std::queue<Index> todo;
    todo.push(0);
    std::vector<bool> seen(static_cast<std::size_t>(m + k), false);
    seen[0] = true;
    while (!todo.empty()) {
        const Index node = todo.front();
        todo.pop();
        for (const std::size_t ci : tree.adj[static_cast<std::size_t>(node)]) {
            const Cell& cell = basis[ci];
            const Index next = tree.other(cell, node);
            if (seen[static_cast<std::size_t>(next)]) continue;
            seen[static_cast<std::size_t>(next)] = true;
            if (next >= m)
                v(cell.col) = c(cell.row, cell.col) - u(cell.row);
            else
                u(cell.row) = c(cell.row, cell.col) - v(cell.col);
            todo.push(next);
        }
    }
    if (!u.allFinite() || !v.allFinite())
        throw NumericalError("w1: basis does not span the transportation tree");
}

// Basis cells on the tree path from column node `col` back to row node `row`.
std::vector<std::size_t> tree_path(const std::vector<Cell>& basis, Index m, Index k, Index row,
                                   Index col) {
    const BasisTree tree(m, k, basis);
    const auto nodes = static_cast<std::size_t>(m + k);
    std::vector<std::ptrdiff_t> via(nodes, -1);
    std::vector<bool> seen(nodes, false);
    const Index start = m + col;
    seen[static_cast<std::size_t>(start)] = true;
    std::queue<Index> todo;
    todo.push(start);
    while (!todo.empty()) {
        const Index node = todo.front();
        todo.pop();
        if (node == row) break;
        for (const std::size_t ci : tree.adj[static_cast<std::size_t>(node)]) {
            const Index next = tree.other(basis[ci], node);
            if (seen[static_cast<std::size_t>(next)]) continue;
            seen[static_cast<std::size_t>(next)] = true;
            via[static_cast<std::size_t>(next)] = static_cast<std::ptrdiff_t>(ci);
            todo.push(next);
        }
    }
    std::vector<std::size_t> path;
    for (Index node = row; node != start;) {
        const auto ci = via[static_cast<std::size_t>(node)];
        if (ci < 0) throw NumericalError("w1: entering cell closes no cycle");
        path.push_back(static_cast<std::size_t>(ci));
        node = tree.other(basis[static_cast<std::size_t>(ci)], node);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

TransportPlan w1_exact(const Matrix& cost, const Vector& mu, const Vector& nu) {
    check_marginals(cost, mu, nu);
    const Index n = cost.rows();
    const auto rows = support(mu);
    const auto cols = support(nu);
    const Index m = static_cast<Index>(rows.size());
    const Index k = static_cast<Index>(cols.size());

    Matrix c(m, k);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < k; ++b) c(a, b) = cost(rows[a], cols[b]);
    const double tol = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());

    // Northwest corner: m + k - 1 basic cells, degenerate zeros allowed.
    std::vector<Cell> basis;
    {
        std::vector<double> supply(static_cast<std::size_t>(m));
        std::vector<double> demand(static_cast<std::size_t>(k));
        for (Index a = 0; a < m; ++a) supply[static_cast<std::size_t>(a)] = mu(rows[a]);
        for (Index b = 0; b < k; ++b) demand[static_cast<std::size_t>(b)] = nu(cols[b]);
        Index a = 0;
        Index b = 0;
        for (Index step = 0; step < m + k - 1; ++step) {
            auto& s = supply[static_cast<std::size_t>(a)];
            auto& d = demand[static_cast<std::size_t>(b)];
            const double x = (a == m - 1 && b == k - 1) ? std::max(0.0, std::min(s, d)) : std::min(s, d);
            basis.push_back({a, b, x});
            s -= x;
            d -= x;
            if (a == m - 1)
                ++b;
            else if (b == k - 1 || s <= d)
                ++a;
            else
                ++b;
        }
    }

    TransportPlan out;
    Vector u;
    Vector v;
    while (true) {
        potentials(basis, c, m, k, u, v);
        std::vector<bool> is_basic(static_cast<std::size_t>(m * k), false);
        for (const auto& cell : basis) is_basic[static_cast<std::size_t>(cell.row * k + cell.col)] = true;

        Index enter_row = -1;
        Index enter_col = -1;
        for (Index a = 0; a < m && enter_row < 0; ++a) {
            for (Index b = 0; b < k; ++b) {
                if (is_basic[static_cast<std::size_t>(a * k + b)]) continue;
                if (c(a, b) - u(a) - v(b) < -tol) {
                    enter_row = a;
                    enter_col = b;
                    break;
                }
            }
        }
        if (enter_row < 0) break;
        if (++out.pivots > kMaxPivots)
            throw NumericalError("w1: pivot cap of " + std::to_string(kMaxPivots) + " reached");

        const auto path = tree_path(basis, m, k, enter_row, enter_col);
        // Cycle: entering (+), then path cells alternate -, +, -, ...
        std::size_t leave = path.front();
        for (std::size_t p = 0; p < path.size(); p += 2) {
            const Cell& cand = basis[path[p]];
            const Cell& best = basis[leave];
            const bool smaller = cand.flow < best.flow;
            const bool tie_lower = cand.flow == best.flow &&
                                   cand.row * k + cand.col < best.row * k + best.col;
            if (smaller || tie_lower) leave = path[p];
        }
        const double theta = basis[leave].flow;
        for (std::size_t p = 0; p < path.size(); ++p)
            basis[path[p]].flow += (p % 2 == 0) ? -theta : theta;
        basis[leave] = {enter_row, enter_col, theta};
    }

    out.plan = Matrix::Zero(n, n);
    for (const auto& cell : basis) {
        const double x = std::max(0.0, cell.flow);
        out.plan(rows[cell.row], cols[cell.col]) += x;
        out.value += x * c(cell.row, cell.col);
    }

    DualPotentials duals{Vector::Zero(n), Vector::Zero(n)};
    std::vector<bool> in_rows(static_cast<std::size_t>(n), false);
    std::vector<bool> in_cols(static_cast<std::size_t>(n), false);
    for (Index a = 0; a < m; ++a) {
        duals.source(rows[a]) = u(a);
        in_rows[static_cast<std::size_t>(rows[a])] = true;
    }
    for (Index b = 0; b < k; ++b) {
        duals.target(cols[b]) = v(b);
        in_cols[static_cast<std::size_t>(cols[b])] = true;
    }
    for (Index x = 0; x < n; ++x) {
        if (in_rows[static_cast<std::size_t>(x)]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (Index b = 0; b < k; ++b) best = std::min(best, cost(x, cols[b]) - v(b));
        duals.source(x) = best;
    }
    for (Index y = 0; y < n; ++y) {
        if (in_cols[static_cast<std::size_t>(y)]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (Index x = 0; x < n; ++x) best = std::min(best, cost(x, y) - duals.source(x));
        duals.target(y) = best;
    }
    out.duality_gap = out.value - (mu.dot(duals.source) + nu.dot(duals.target));
    double worst = 0.0;
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
            worst = std::max(worst, duals.source(x) + duals.target(y) - cost(x, y));
    out.dual_infeasibility = worst;
    out.duals = std::move(duals);
    return out;
}

double w1_vertex_enumeration(const Matrix& cost, const Vector& mu, const Vector& nu) {
    check_marginals(cost, mu, nu);
    const auto rows = support(mu);
    const auto cols = support(nu);
    const std::size_t m = rows.size();
    const std::size_t k = cols.size();
    const std::size_t cells = m * k;
    if (cells > 20) throw PreconditionError("w1_vertex_enumeration: supports too large");
    const std::size_t basic = m + k - 1;

    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != basic) continue;
        // Leaf elimination solves the flows on a spanning tree uniquely; a
        // subset with a cycle leaves nodes that never become leaves.
        std::vector<std::size_t> chosen;
        for (std::size_t c = 0; c < cells; ++c)
            if (mask & (1u << c)) chosen.push_back(c);
        std::vector<double> residual(m + k);
        for (std::size_t a = 0; a < m; ++a) residual[a] = mu(rows[a]);
        for (std::size_t b = 0; b < k; ++b) residual[m + b] = nu(cols[b]);
        std::vector<int> degree(m + k, 0);
        for (const auto c : chosen) {
            ++degree[c / k];
            ++degree[m + c % k];
        }
        std::vector<bool> used(chosen.size(), false);
        double value = 0.0;
        bool feasible = true;
        for (std::size_t round = 0; round < chosen.size() && feasible; ++round) {
            // Any leaf node fixes the flow on its single remaining cell.
            std::size_t pick = chosen.size();
            std::size_t leaf = 0;
            for (std::size_t e = 0; e < chosen.size() && pick == chosen.size(); ++e) {
                if (used[e]) continue;
                const std::size_t r = chosen[e] / k;
                const std::size_t col = m + chosen[e] % k;
                if (degree[r] == 1) {
                    pick = e;
                    leaf = r;
                } else if (degree[col] == 1) {
                    pick = e;
                    leaf = col;
                }
            }
            if (pick == chosen.size()) {
                feasible = false;
                break;
            }
            const std::size_t r = chosen[pick] / k;
            const std::size_t col = m + chosen[pick] % k;
            const std::size_t far = leaf == r ? col : r;
            const double x = residual[leaf];
            if (x < -1e-12) feasible = false;
            residual[leaf] = 0.0;
            residual[far] -= x;
            --degree[r];
            --degree[col];
            used[pick] = true;
            value += x * cost(rows[r], cols[col - m]);
        }
        if (!feasible) continue;
        for (const double res : residual)
            if (std::abs(res) > 1e-9) feasible = false;
        if (feasible) best = std::min(best, value);
    }
    if (!std::isfinite(best)) throw NumericalError("w1_vertex_enumeration: no feasible vertex");
    return best;
}

}  // namespace sgcurv
