#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kwcl/keywords/types.hpp"

namespace kwcl::keywords {

struct YakeConfig {
    std::size_t window = 2;       // neighbor distance for relatedness stats
    std::size_t max_candidates = 0; // 0 = unlimited
};

/// Raw per-term statistics and the five derived features. Exposed so tests
/// can pin them against a hand-executed computation.
struct YakeTermStats {
    std::size_t tf = 0;          // total occurrences
    std::size_t tf_upper = 0;    // uppercase-initial occurrences, sentence-initial excluded
    std::size_t tf_acronym = 0;  // all-caps occurrences of length >= 2
    std::vector<std::size_t> sentence_indices; // sorted, distinct
    std::size_t distinct_left = 0;   // distinct in-window left neighbors
    std::size_t total_left = 0;      // total in-window left neighbor slots
    std::size_t distinct_right = 0;
    std::size_t total_right = 0;

    double casing = 0.0;      // max(tf_upper, tf_acronym) / (1 + ln tf)
    double position = 0.0;    // ln(ln(3 + median sentence index))
    double frequency = 0.0;   // tf / (mean_tf + stddev_tf)
    double relatedness = 1.0; // 1 + (dl_ratio + dr_ratio) * tf / max_tf
    double spread = 0.0;      // |sentences containing t| / |sentences|
    double score = 0.0;       // lower = more important
};

struct YakeAnalysis {
    std::size_t num_sentences = 0;
    double mean_tf = 0.0;   // over candidate terms
    double stddev_tf = 0.0; // population std over candidate terms
    std::size_t max_tf = 0;
    std::map<std::string, YakeTermStats> terms; // candidates only (stopwords excluded)
};

/// Single pass over the corpus: sentence split on [.!?] and newlines, tokens
/// are alphanumeric runs with case kept for the casing feature, candidate
/// identity is the lowercased token. Stopwords are excluded from candidates
/// but still occupy neighbor and position slots.
YakeAnalysis yake_term_stats(const std::vector<std::string>& texts, const YakeConfig& cfg = {});

/// Lower-is-better score to higher-is-better weight: w = 1 / (1 + S).
double yake_weight(double score);

/// S(t) = relatedness * position / (casing + frequency/relatedness + spread/relatedness),
/// emitted as weight w(t) = 1 / (1 + S(t)) so higher weight = more important.
KeywordList extract_yake(const std::string& domain, const std::vector<std::string>& texts,
                         const YakeConfig& cfg = {});

} // namespace kwcl::keywords
