#include "doctest.h"
#include "oracles.hpp"
#include "sgcurv/corpus.hpp"
#include "sgcurv/curvature.hpp"
#include "sgcurv/errors.hpp"
#include "sgcurv/verify.hpp"

using namespace sgcurv;
using Eigen::Index;

namespace {

constexpr double kPrinted = 2e-3;

SignedGraph c3() { return graph_from_labels(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, -1}}); }
SignedGraph c4() { return graph_from_labels(4, {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, -1}}); }

SignedGraph k4(const std::vector<std::pair<int, int>>& negatives) {
    std::vector<std::array<int, 3>> edges;
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) {
            const bool neg = std::find(negatives.begin(), negatives.end(), std::pair{a, b}) !=
                             negatives.end();
            edges.push_back({a, b, neg ? -1 : 1});
        }
    return graph_from_labels(4, edges);
}

SignedGraph positive_cycle(int n) {
    std::vector<std::array<int, 3>> edges;
    for (int v = 1; v <= n; ++v) edges.push_back({v, v % n + 1, 1});
    return graph_from_labels(static_cast<std::size_t>(n), edges);
}

// 1-based vertex helpers keep the fixtures readable.
double theta_at(const RepellingAnalysis& a, const NodeCurvature& n, Vertex i, Vertex j) {
    return edge_curvature(a, n.tau, i - 1, j - 1);
}

}  // namespace

TEST_CASE("node curvature of the reference cycles") {
    const RepellingAnalysis a3 = repelling_cost_matrix(c3(), 0.2);
    const NodeCurvature n3 = node_curvature(a3);
    CHECK(std::abs(n3.tau(1) + 0.5625) < kPrinted);
    CHECK(std::abs(n3.tau(0) - 1.125) < kPrinted);
    CHECK(std::abs(n3.tau(2) - 1.125) < kPrinted);

    const NodeCurvature n4 = node_curvature(repelling_cost_matrix(c4(), 0.1));
    CHECK(std::abs(n4.tau(1) + 0.2569) < kPrinted);
    CHECK(std::abs(n4.tau(2) + 0.2569) < kPrinted);
    CHECK(std::abs(n4.tau(0) - 1.156) < kPrinted);
    CHECK(std::abs(n4.tau(3) - 1.156) < kPrinted);

    const NodeCurvature nk = node_curvature(repelling_cost_matrix(k4({{1, 3}, {2, 4}}), 0.5));
    for (Index v = 0; v < 4; ++v) CHECK(std::abs(nk.tau(v) - 0.8889) < kPrinted);
    CHECK(nk.tau.maxCoeff() - nk.tau.minCoeff() <= 1e-8);
}

TEST_CASE("node curvature of a single edge") {
    // Omega = [[0,1],[1,0]] so tau = (2,2) and phi = 4.
    const NodeCurvature n = node_curvature(repelling_cost_matrix(SignedGraph(2, {{0, 1, 1.0, Sign::positive}}), 0.0));
    CHECK(n.tau(0) == doctest::Approx(2.0));
    CHECK(n.tau(1) == doctest::Approx(2.0));
    CHECK(n.phi == doctest::Approx(4.0));
}

TEST_CASE("node curvature routes agree and sum to phi") {
    for (std::uint64_t k = 0; k < 100; ++k) {
        const CorpusInstance c = corpus_instance(50, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const NodeCurvature n = node_curvature(a);
        const double scale = std::max(1.0, n.tau.cwiseAbs().maxCoeff());
        CHECK(n.route_difference <= 1e-8 * scale);
        CHECK(std::abs(n.tau.sum() - n.phi) <= 1e-8 * std::max(1.0, std::abs(n.phi)));
        const Vector lhs = a.omega.matrix() * n.tau;
        CHECK((lhs.array() - static_cast<double>(a.size())).abs().maxCoeff() <= 1e-8 * scale);
        CHECK(n.phi == doctest::Approx(static_cast<double>(a.size()) *
                                       a.omega.matrix().fullPivLu().solve(Vector::Ones(lhs.size())).sum())
                           .epsilon(1e-9));
    }
}

TEST_CASE("node curvature is constant on vertex-transitive graphs") {
    for (int n = 3; n <= 9; ++n) {
        const NodeCurvature c = node_curvature(repelling_cost_matrix(positive_cycle(n), 0.0));
        CHECK(c.tau.maxCoeff() - c.tau.minCoeff() <= 1e-8);
    }
}

TEST_CASE("edge_lambda tables") {
    const RepellingAnalysis a3 = repelling_cost_matrix(c3(), 0.2);
    CHECK(std::abs(edge_lambda(a3, 0, 1)) < 1e-12);
    CHECK(std::abs(edge_lambda(a3, 1, 2)) < 1e-12);
    CHECK(edge_lambda(a3, 0, 2) == doctest::Approx(2.0));

    const RepellingAnalysis a4 = repelling_cost_matrix(c4(), 0.1);
    CHECK(std::abs(edge_lambda(a4, 1, 2)) < 1e-12);
    CHECK(edge_lambda(a4, 0, 3) == doctest::Approx(2.0));

    const RepellingAnalysis t = repelling_cost_matrix(k4({{2, 3}, {2, 4}, {3, 4}}), 0.1);
    for (const auto& [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}})
        CHECK(edge_lambda(t, static_cast<Vertex>(i), static_cast<Vertex>(j)) == doctest::Approx(2.0));
    for (Vertex j = 1; j < 4; ++j) CHECK(std::abs(edge_lambda(t, 0, j)) < 1e-12);
}

TEST_CASE("edge_lambda vanishes where neither endpoint has a negative edge") {
    for (std::uint64_t k = 0; k < 40; ++k) {
        const CorpusInstance c = corpus_instance(51, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const Degrees d = degrees(c.graph);
        for (const auto& e : c.graph.edges())
            if (d.minus[e.u] == 0.0 && d.minus[e.v] == 0.0)
                CHECK(std::abs(edge_lambda(a, e.u, e.v)) <= 1e-12);
    }
}

TEST_CASE("edge curvature tables") {
    const RepellingAnalysis a3 = repelling_cost_matrix(c3(), 0.3);
    const NodeCurvature n3 = node_curvature(a3);
    CHECK(std::abs(theta_at(a3, n3, 1, 2) - 0.1399) < kPrinted);
    CHECK(std::abs(theta_at(a3, n3, 2, 3) - 0.1399) < kPrinted);
    CHECK(std::abs(theta_at(a3, n3, 1, 3) - 3.2857) < kPrinted);

    const RepellingAnalysis one = repelling_cost_matrix(k4({{1, 4}}), 0.5);
    const NodeCurvature n1 = node_curvature(one);
    CHECK(std::abs(theta_at(one, n1, 1, 2) - 4.4329) < kPrinted);
    CHECK(std::abs(theta_at(one, n1, 2, 3) + 3.8784) < kPrinted);
    CHECK(std::abs(theta_at(one, n1, 1, 4) - 7.8484) < kPrinted);

    const RepellingAnalysis tri = repelling_cost_matrix(k4({{2, 3}, {2, 4}, {3, 4}}), 0.1);
    const NodeCurvature nt = node_curvature(tri);
    for (Vertex j = 2; j <= 4; ++j) CHECK(std::abs(theta_at(tri, nt, 1, j) + 0.717) < kPrinted);
    CHECK(std::abs(theta_at(tri, nt, 2, 3) - 3.6518) < kPrinted);
    CHECK(std::abs(theta_at(tri, nt, 3, 4) - 3.6518) < kPrinted);
}

TEST_CASE("edge_heat_rate is the curvature formula with tau / phi") {
    for (std::uint64_t k = 0; k < 30; ++k) {
        const CorpusInstance c = corpus_instance(52, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const NodeCurvature n = node_curvature(a);
        const Vector r = n.tau / n.phi;
        for (const auto& e : c.graph.edges())
            CHECK(edge_heat_rate(a, n, e.u, e.v) ==
                  doctest::Approx(edge_curvature(a, r, e.u, e.v)).epsilon(1e-12));
    }
}

TEST_CASE("heat limit on C3 edge (1,3) converges to the heat rate") {
    const RepellingAnalysis a = repelling_cost_matrix(c3(), 0.2);
    const NodeCurvature n = node_curvature(a);
    const std::vector<double> coarse{0.1, 0.05, 0.025};
    const HeatLimitEstimate h = heat_limit_estimate(a, 0, 2, coarse);
    REQUIRE(h.table.size() == 3);
    CHECK(h.heat_rate == doctest::Approx(edge_heat_rate(a, n, 0, 2)));
    CHECK(h.heat_rate == doctest::Approx(3.2).epsilon(1e-9));
    CHECK(std::abs(h.theta - 3.7501) < kPrinted);
    // Three-point extrapolation from t <= 0.1 leaves an O(t^3) remainder.
    CHECK(std::abs(h.estimate - h.heat_rate) < 5e-3);
    // The curvature value itself is not the heat-semigroup limit here.
    CHECK(std::abs(h.estimate - h.theta) > 0.5);
    for (const double ratio : h.heat_rate_ratios) {
        CHECK(ratio >= 1.5);
        CHECK(ratio <= 2.5);
    }

    const std::vector<double> fine{0.004, 0.002, 0.001};
    const HeatLimitEstimate f = heat_limit_estimate(a, 0, 2, fine);
    CHECK(std::abs(f.estimate - f.heat_rate) < 1e-6);
}

TEST_CASE("heat limit validates the time sequence") {
    const RepellingAnalysis a = repelling_cost_matrix(c3(), 0.2);
    const std::vector<double> rising{0.01, 0.02};
    const std::vector<double> too_big{2.0, 1.0};
    const std::vector<double> zero{0.1, 0.0};
    CHECK_THROWS_AS(heat_limit_estimate(a, 0, 2, rising), PreconditionError);
    CHECK_THROWS_AS(heat_limit_estimate(a, 0, 2, too_big), PreconditionError);
    CHECK_THROWS_AS(heat_limit_estimate(a, 0, 2, zero), PreconditionError);
}

TEST_CASE("first-order expansion with circumcenter weights is second-order accurate") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const CorpusInstance c = corpus_instance(53, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const NodeCurvature n = node_curvature(a);
        const SpectralDecomposition q = eigen_sym(laplacian(c.graph, LaplacianKind::underlying));
        const Vector r = n.tau / n.phi;
        const Edge& e = c.graph.edges()[k % c.graph.num_edges()];
        const double t = 1e-3;
        auto err = [&](const Vector& x, double s) {
            return std::abs(expected_cost_exact(a, q, e.u, e.v, s) -
                            expected_cost_expansion(a, x, e.u, e.v, s));
        };
        const double scale = std::max(1.0, a.omega.max_abs());
        const double e1 = err(r, t);
        const double e2 = err(r, t / 2);
        // Halving t divides an O(t^2) remainder by about four.
        CHECK(e1 <= 1e-3 * scale);
        if (e2 > 1e-12 * scale) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
        // With tau in place of tau / phi the remainder stays first order.
        const double gap = 2.0 * std::abs((n.tau(e.u) + n.tau(e.v)) * (1.0 - 1.0 / n.phi));
        if (gap > 1e-3 * scale) {
            const double s = 1e-6;
            CHECK(err(n.tau, s) / s == doctest::Approx(gap).epsilon(1e-2));
        }
    }
}

TEST_CASE("expected cost at t = 0 is Omega") {
    const CorpusInstance c = corpus_instance(54, 0);
    const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
    const SpectralDecomposition q = eigen_sym(laplacian(c.graph, LaplacianKind::underlying));
    for (const auto& e : c.graph.edges())
        CHECK(expected_cost_exact(a, q, e.u, e.v, 0.0) == doctest::Approx(a.omega(e.u, e.v)));
}

TEST_CASE("heat limit on positive graphs has no correction term") {
    const SignedGraph g = positive_cycle(5);
    const RepellingAnalysis a = repelling_cost_matrix(g, 0.0);
    const NodeCurvature n = node_curvature(a);
    for (const auto& e : g.edges()) {
        CHECK(std::abs(edge_lambda(a, e.u, e.v)) < 1e-14);
        const double rate = 2.0 * (n.tau(e.u) + n.tau(e.v)) / n.phi / a.omega(e.u, e.v);
        const std::vector<double> ts{0.02, 0.01, 0.005};
        const HeatLimitEstimate h = heat_limit_estimate(a, e.u, e.v, ts);
        CHECK(h.estimate == doctest::Approx(rate).epsilon(1e-4));
        CHECK(h.theta == doctest::Approx(2.0 * (n.tau(e.u) + n.tau(e.v)) / a.omega(e.u, e.v)));
    }
}

TEST_CASE("LLY curvature stabilizes and is step independent") {
    const RepellingAnalysis a = repelling_cost_matrix(c3(), 0.2);
    const LlyCurvature l = lly_curvature(a, 0, 1);
    CHECK(l.stabilized);
    CHECK(std::abs(l.kappa - l.kappa_prev) <= 1e-9 * std::max(1.0, std::abs(l.kappa)));

    auto kappa = [&](double alpha) {
        const Vector mi = lazy_walk(a, 0, alpha);
        const Vector mj = lazy_walk(a, 1, alpha);
        const double w = w1_vertex_enumeration(a.omega.matrix(), mi, mj);
        return (1.0 - w / a.omega(0, 1)) / alpha;
    };
    CHECK(kappa(1e-4) == doctest::Approx(kappa(5e-5)).epsilon(1e-9));
    CHECK(l.kappa == doctest::Approx(kappa(1e-4)).epsilon(1e-8));
}

TEST_CASE("lazy walk is a distribution and the product plan bounds W1") {
    for (std::uint64_t k = 0; k < 30; ++k) {
        const CorpusInstance c = corpus_instance(55, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const auto total = degrees(c.graph).total();
        const double alpha = 0.5 / *std::max_element(total.begin(), total.end());
        for (const auto& e : c.graph.edges()) {
            const Vector mi = lazy_walk(a, e.u, alpha);
            const Vector mj = lazy_walk(a, e.v, alpha);
            CHECK(mi.sum() == doctest::Approx(1.0));
            CHECK(mi.minCoeff() >= 0.0);
            const TransportPlan t = w1_exact(a.omega.matrix(), mi, mj);
            CHECK(t.value <= mi.dot(a.omega.matrix() * mj) + 1e-12);
        }
    }
}

TEST_CASE("extremal costs") {
    const RepellingAnalysis k = repelling_cost_matrix(k4({{1, 3}, {2, 4}}), 0.5);
    const ExtremalCosts ek = extremal_costs(k, node_curvature(k));
    REQUIRE(ek.x_ok);
    CHECK(*ek.x_ok);
    CHECK(ek.x <= ek.x_bound);

    // Unit triangle: Omega = 2/3 everywhere, tau = 9/4, phi = 27/4, so the
    // minimal cost 2/3 exceeds |V| / phi = 4/9 while the maximal one is below 8/9.
    const RepellingAnalysis p = repelling_cost_matrix(positive_cycle(3), 0.0);
    const ExtremalCosts ep = extremal_costs(p, node_curvature(p));
    CHECK(ep.x == doctest::Approx(2.0 / 3.0));
    CHECK(ep.n == doctest::Approx(2.0 / 3.0));
    CHECK(ep.n_bound == doctest::Approx(4.0 / 9.0));
    CHECK(*ep.x_ok);
    CHECK_FALSE(*ep.n_ok);
    CHECK_FALSE(*ep.bounds_ok);
    CHECK(ek.n > ek.n_bound);

    const RepellingAnalysis c = repelling_cost_matrix(c3(), 0.2);
    const ExtremalCosts ec = extremal_costs(c, node_curvature(c));
    CHECK_FALSE(ec.bounds_ok);
    CHECK_FALSE(ec.x_ok);
    CHECK_FALSE(ec.n_ok);
}

TEST_CASE("maximal cost bound on random instances with nonnegative tau") {
    int applicable = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const CorpusInstance c = corpus_instance(56, k);
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
        const ExtremalCosts e = extremal_costs(a, node_curvature(a));
        if (!e.x_ok) continue;
        ++applicable;
        CHECK(*e.x_ok);
    }
    CHECK(applicable > 0);
}

TEST_CASE("curvature_report collects per-edge values") {
    const RepellingAnalysis a = repelling_cost_matrix(c3(), 0.2);
    const CurvatureReport r = curvature_report(a);
    CHECK(r.epsilon == 0.2);
    REQUIRE(r.edges.size() == 3);
    const EdgeCurvature* e = r.find(2, 0);
    REQUIRE(e != nullptr);
    CHECK(e->lambda == doctest::Approx(2.0));
    CHECK(std::abs(e->theta - 3.7501) < kPrinted);
    REQUIRE(e->lly);
    CHECK(r.find(0, 0) == nullptr);
    CHECK_FALSE(curvature_report(a, false).edges[0].lly);
}
