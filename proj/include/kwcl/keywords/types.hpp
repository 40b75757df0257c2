#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kwcl::keywords {

struct KeywordEntry {
    std::string word;
    double weight = 0.0; // non-negative, higher = more domain-indicative
};

/// Full or truncated keyword ranking for one domain. Entries are sorted by
/// weight descending, ties broken by word ascending, words unique.
struct KeywordList {
    std::string domain;
    std::vector<KeywordEntry> entries;
};

struct RankedDomain {
    std::string domain;
    double weight_sum = 0.0;
};

/// Domains sorted by top-N keyword weight sum, descending; ties broken
/// lexicographically by domain id. Always a permutation of the dataset's
/// domain list.
struct DomainRanking {
    std::string extractor;
    std::size_t top_n = 0;
    std::vector<RankedDomain> entries;

    std::vector<std::string> order() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (const RankedDomain& e : entries) out.push_back(e.domain);
        return out;
    }
};

/// Sorts entries in place: weight descending, word ascending on ties.
/// Every extractor funnels through this so list ordering is uniform.
void sort_entries(std::vector<KeywordEntry>& entries);

} // namespace kwcl::keywords
