#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kwcl/keywords/types.hpp"

namespace kwcl::keywords {

/// First min(N, len) entries, order preserved.
KeywordList top_n(const KeywordList& list, std::size_t n);

/// Plain left-to-right sum of the (already truncated) entry weights.
double domain_weight(const KeywordList& list);

/// Sorts weight-descending, lexicographic on ties. `domains` is the dataset's
/// domain list; a weight must be present for each of them.
DomainRanking rank_domains(const std::map<std::string, double>& weights,
                           const std::vector<std::string>& domains,
                           const std::string& extractor, std::size_t top_n);

/// Convenience: truncate each per-domain list to N, sum, rank.
DomainRanking rank_from_lists(const std::vector<KeywordList>& lists,
                              const std::vector<std::string>& domains,
                              const std::string& extractor, std::size_t n);

/// Seeded uniform permutation baseline; weights recorded as 0.
DomainRanking random_ranking(const std::vector<std::string>& domains, std::uint64_t seed);

} // namespace kwcl::keywords
