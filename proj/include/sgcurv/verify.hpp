#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgcurv/signed_graph.hpp"

namespace sgcurv {

/// One compared quantity. With `expected` set the check passes when
/// |computed - expected| <= tol; without it, when computed <= tol.
struct Check {
    std::string block;
    std::string label;
    std::optional<double> expected;
    double computed = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CriterionResult {
    std::string tag;
    int id = 0;  ///< 0 for ungated extra blocks
    std::string title;
    bool pass = false;
    std::size_t checks = 0;
    std::size_t failed = 0;
    double seconds = 0.0;
};

struct VerifyOptions {
    /// Tags to run; empty runs everything.
    std::set<std::string> only;
    /// Defaults to corpus_seed().
    std::optional<std::uint64_t> seed;
    std::size_t corpus_size = 500;
    std::size_t bound_corpus_size = 100;
    /// Multiplies the weight of C3 edge (1,2); 1 leaves the fixture intact.
    double c3_weight_factor = 1.0;
};

struct VerifyResult {
    std::vector<Check> checks;
    std::vector<CriterionResult> criteria;

    /// True iff every gated criterion that ran passed.
    bool all_pass() const;
};

/// Block tags in run order: example, c3, c4, k4, identities, inequalities,
/// heat, ot, consensus-bound (criteria 1-9), then the ungated k4-path and
/// heat-rate blocks.
const std::vector<std::string>& verify_tags();

VerifyResult run_verify(const VerifyOptions& options);

/// 1-based labels (a, b, sign) to a 0-based graph with unit weights.
SignedGraph graph_from_labels(std::size_t n, const std::vector<std::array<int, 3>>& edges);

}  // namespace sgcurv
