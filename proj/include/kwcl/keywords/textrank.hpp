#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kwcl/corpus/tokenizer.hpp"
#include "kwcl/keywords/types.hpp"

namespace kwcl::keywords {

struct TextRankConfig {
    std::size_t window = 4;
    double damping = 0.85;
    std::size_t max_iters = 200;
    double tol = 1e-8;
    corpus::TokenizerConfig tokenizer;
};

/// Undirected unweighted co-occurrence graph. Nodes are distinct content
/// tokens; adjacency lists are sorted and deduplicated, no self-loops.
struct CooccurrenceGraph {
    std::vector<std::string> nodes;
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t size() const { return nodes.size(); }
};

/// Builds the graph over stopword-filtered token sequences, one sequence per
/// document; co-occurrence windows never span documents.
CooccurrenceGraph build_cooccurrence_graph(const std::vector<std::string>& texts,
                                           const TextRankConfig& cfg);

/// Iterates S(v) = (1-d) + d * sum_{u in adj(v)} S(u)/deg(u) with synchronous
/// updates from all-ones until max |delta| <= tol or max_iters. Isolated
/// nodes settle at (1-d).
std::vector<double> pagerank_scores(const CooccurrenceGraph& graph, double damping,
                                    std::size_t max_iters, double tol);

/// Full untruncated ranking of all content tokens by TextRank score.
KeywordList extract_textrank(const std::string& domain,
                             const std::vector<std::string>& texts,
                             const TextRankConfig& cfg = {});

} // namespace kwcl::keywords
