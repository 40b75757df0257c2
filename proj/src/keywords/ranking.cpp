#include "kwcl/keywords/ranking.hpp"

#include <algorithm>

#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::keywords {

KeywordList top_n(const KeywordList& list, std::size_t n) {
    if (n < 1) throw ConfigError("ranking: N must be >= 1");
    KeywordList out;
    out.domain = list.domain;
    std::size_t keep = std::min(n, list.entries.size());
    out.entries.assign(list.entries.begin(), list.entries.begin() + static_cast<std::ptrdiff_t>(keep));
    return out;
}

double domain_weight(const KeywordList& list) {
    double sum = 0.0;
    for (const KeywordEntry& e : list.entries) sum += e.weight;
    return sum;
}

DomainRanking rank_domains(const std::map<std::string, double>& weights,
                           const std::vector<std::string>& domains,
                           const std::string& extractor, std::size_t top_n) {
    DomainRanking ranking;
    ranking.extractor = extractor;
    ranking.top_n = top_n;
    for (const std::string& d : domains) {
        auto it = weights.find(d);
        if (it == weights.end()) throw DataError("ranking: missing weight for domain '" + d + "'");
        ranking.entries.push_back({d, it->second});
    }
    if (weights.size() != domains.size()) {
        throw DataError("ranking: weights cover domains outside the dataset");
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankedDomain& a, const RankedDomain& b) {
                  if (a.weight_sum != b.weight_sum) return a.weight_sum > b.weight_sum;
                  return a.domain < b.domain;
              });
    return ranking;
}

DomainRanking rank_from_lists(const std::vector<KeywordList>& lists,
                              const std::vector<std::string>& domains,
                              const std::string& extractor, std::size_t n) {
    std::map<std::string, double> weights;
    for (const KeywordList& list : lists) {
        weights[list.domain] = domain_weight(top_n(list, n));
    }
    return rank_domains(weights, domains, extractor, n);
}

DomainRanking random_ranking(const std::vector<std::string>& domains, std::uint64_t seed) {
    auto rng = util::make_rng(util::subseed(seed, "random-order"));
    std::vector<std::string> shuffled = domains;
    util::shuffle(shuffled, rng);
    DomainRanking ranking;
    ranking.extractor = "random";
    ranking.top_n = 0;
    for (const std::string& d : shuffled) ranking.entries.push_back({d, 0.0});
    return ranking;
}

} // namespace kwcl::keywords
