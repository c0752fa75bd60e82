#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sgcurv/signed_graph.hpp"

namespace sgcurv {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// SGCURV_SEED from the environment when set and numeric, else kDefaultSeed.
std::uint64_t corpus_seed();

struct CorpusOptions {
    std::size_t min_vertices = 3;
    std::size_t max_vertices = 12;
    double min_weight = 0.5;
    double max_weight = 2.0;
};

struct CorpusInstance {
    std::uint64_t seed = 0;
    SignedGraph graph;
    double consensus_index = 0.0;
    double epsilon = 0.0;  ///< uniform in (0, 0.9 consensus_index)
};

/// Random positive-connected signed graph with at least one negative edge:
/// a random positive spanning tree plus each remaining pair with a random
/// density and a fair sign coin.
SignedGraph random_signed_graph(std::mt19937_64& rng, const CorpusOptions& options = {});

/// Random positive-connected graph in which every biconnected block carries
/// at most one negative edge (between one and three negative edges).
SignedGraph random_no_negative_cycle_graph(std::mt19937_64& rng,
                                           const CorpusOptions& options = {});

/// Instance k draws from mt19937_64 seeded with (seed, k), so any single
/// instance can be regenerated on its own.
CorpusInstance corpus_instance(std::uint64_t seed, std::uint64_t k,
                               const CorpusOptions& options = {});

std::vector<CorpusInstance> corpus(std::uint64_t seed, std::size_t count,
                                   const CorpusOptions& options = {});

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t k);

}  // namespace sgcurv
