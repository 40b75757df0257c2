#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kwcl/corpus/tokenizer.hpp"
#include "kwcl/keywords/types.hpp"

namespace kwcl::keywords {

/// Precomputed token embeddings, the stand-in for a live sentence encoder.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::map<std::string, std::vector<double>> vectors;

    bool contains(const std::string& token) const { return vectors.count(token) != 0; }
};

/// Text format: first line "<count> <dim>", then one "<token> <v1> ... <vd>"
/// per line. Errors on duplicate tokens, dimension mismatch, non-finite
/// components, or a count that disagrees with the body.
EmbeddingTable load_embedding_table(const std::string& path);

struct EmbeddingSimConfig {
    bool freq_weighted_centroid = true; // false = mean over distinct tokens
    double min_coverage = 0.5;          // fraction of distinct content tokens in table
    corpus::TokenizerConfig tokenizer;
};

/// Weight of each in-table content token = max(0, cosine(vector, centroid)).
/// The centroid averages in-table content-token vectors, by occurrence count
/// or by distinct token. Errors when coverage < min_coverage (message names
/// the missing fraction) or the centroid has zero norm.
KeywordList extract_embedding_sim(const std::string& domain,
                                  const std::vector<std::string>& texts,
                                  const EmbeddingTable& table,
                                  const EmbeddingSimConfig& cfg = {});

} // namespace kwcl::keywords
