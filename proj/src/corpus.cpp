#include "sgcurv/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <numeric>

#include "sgcurv/repelling.hpp"

namespace sgcurv {

namespace {

using Pairs = std::vector<std::pair<Vertex, Vertex>>;

struct Draft {
    std::size_t n = 0;
    std::vector<Edge> edges;
    std::vector<bool> used;  // n * n adjacency flags

    bool has(Vertex a, Vertex b) const { return used[a * n + b]; }
    void add(Vertex a, Vertex b, double w, Sign s) {
        if (a > b) std::swap(a, b);
        edges.push_back({a, b, w, s});
        used[a * n + b] = used[b * n + a] = true;
    }
};

Draft random_tree(std::mt19937_64& rng, const CorpusOptions& o) {
    std::uniform_int_distribution<std::size_t> size(o.min_vertices, o.max_vertices);
    std::uniform_real_distribution<double> weight(o.min_weight, o.max_weight);
    Draft d;
    d.n = size(rng);
    d.used.assign(d.n * d.n, false);
    std::vector<Vertex> label(d.n);
    std::iota(label.begin(), label.end(), Vertex{0});
    std::shuffle(label.begin(), label.end(), rng);
    for (std::size_t v = 1; v < d.n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        d.add(label[parent(rng)], label[v], weight(rng), Sign::positive);
    }
    return d;
}

Pairs free_pairs(const Draft& d, std::mt19937_64& rng) {
    Pairs out;
    for (Vertex a = 0; a < d.n; ++a)
        for (Vertex b = a + 1; b < d.n; ++b)
            if (!d.has(a, b)) out.emplace_back(a, b);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

}  // namespace

std::uint64_t corpus_seed() {
    const char* env = std::getenv("SGCURV_SEED");
    if (env == nullptr) return kDefaultSeed;
    std::uint64_t value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    return (ec == std::errc{} && ptr == end && ptr != env) ? value : kDefaultSeed;
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    return std::mt19937_64(seq);
}

SignedGraph random_signed_graph(std::mt19937_64& rng, const CorpusOptions& options) {
    std::uniform_real_distribution<double> weight(options.min_weight, options.max_weight);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Draft d = random_tree(rng, options);
    const double density = 0.2 + 0.6 * unit(rng);
    bool negative = false;
    for (const auto& [a, b] : free_pairs(d, rng)) {
        if (unit(rng) >= density) continue;
        const Sign s = unit(rng) < 0.5 ? Sign::negative : Sign::positive;
        negative = negative || s == Sign::negative;
        d.add(a, b, weight(rng), s);
    }
    if (!negative) {
        const auto pairs = free_pairs(d, rng);
        if (!pairs.empty()) {
            d.add(pairs.front().first, pairs.front().second, weight(rng), Sign::negative);
        } else {
            // Complete graph: flip a non-tree edge (tree edges come first).
            d.edges.back().sign = Sign::negative;
        }
    }
    return SignedGraph(d.n, std::move(d.edges));
}

SignedGraph random_no_negative_cycle_graph(std::mt19937_64& rng, const CorpusOptions& options) {
    std::uniform_real_distribution<double> weight(options.min_weight, options.max_weight);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> wanted(1, 3);
    while (true) {
        Draft d = random_tree(rng, options);
        for (const auto& [a, b] : free_pairs(d, rng))
            if (unit(rng) < 0.1) d.add(a, b, weight(rng), Sign::positive);
        const int target = wanted(rng);
        int placed = 0;
        for (const auto& [a, b] : free_pairs(d, rng)) {
            if (placed == target) break;
            std::vector<Edge> trial = d.edges;
            trial.push_back({a, b, weight(rng), Sign::negative});
            SignedGraph g(d.n, trial);
            if (!satisfies_no_negative_cycle(g)) continue;
            d.add(a, b, trial.back().weight, Sign::negative);
            ++placed;
        }
        if (placed > 0) return SignedGraph(d.n, std::move(d.edges));
    }
}

CorpusInstance corpus_instance(std::uint64_t seed, std::uint64_t k, const CorpusOptions& options) {
    auto rng = instance_rng(seed, k);
    CorpusInstance inst;
    inst.seed = k;
    inst.graph = random_signed_graph(rng, options);
    inst.consensus_index = *consensus_index(inst.graph).value;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    while (u == 0.0) u = unit(rng);
    inst.epsilon = 0.9 * inst.consensus_index * u;
    return inst;
}

std::vector<CorpusInstance> corpus(std::uint64_t seed, std::size_t count,
                                   const CorpusOptions& options) {
    std::vector<CorpusInstance> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(corpus_instance(seed, k, options));
    return out;
}

}  // namespace sgcurv
