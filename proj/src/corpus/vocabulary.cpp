#include "kwcl/corpus/vocabulary.hpp"

#include <algorithm>
#include <map>

#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::corpus {

Vocabulary Vocabulary::build(const MultiDomainDataset& dataset, const TokenizerConfig& tok,
                             std::size_t min_freq, std::size_t max_size) {
    if (min_freq < 1) throw ConfigError("vocabulary: min_freq must be >= 1");
    if (max_size < 2) throw ConfigError("vocabulary: max_size must be >= 2 (PAD and UNK)");

    std::map<std::string, std::size_t> freq; // ordered map gives lexicographic ties for free
    bool any_token = false;
    for (std::size_t i = 0; i < dataset.num_domains(); ++i) {
        for (std::string_view text : dataset.fit_texts(i)) {
            for (std::string& t : tokenize(text, tok)) {
                ++freq[std::move(t)];
                any_token = true;
            }
        }
    }
    if (!any_token) throw DataError("vocabulary: training corpus is empty");

    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [token, count] : freq) {
        if (count >= min_freq) kept.emplace_back(token, count);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second > b.second; // stable: equal counts stay lexicographic
    });
    if (kept.size() > max_size - 2) kept.resize(max_size - 2);

    std::vector<std::string> tokens;
    tokens.reserve(kept.size() + 2);
    tokens.emplace_back("<pad>");
    tokens.emplace_back("<unk>");
    for (auto& [token, count] : kept) tokens.push_back(std::move(token));
    return from_tokens(tokens);
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
    Vocabulary v;
    v.tokens_ = tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        v.index_.emplace(tokens[i], static_cast<std::int32_t>(i));
    }
    return v;
}

std::int32_t Vocabulary::id(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? kUnk : it->second;
}

std::vector<std::string> Vocabulary::content_tokens() const {
    return {tokens_.begin() + 2, tokens_.end()};
}

std::uint64_t Vocabulary::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const std::string& t : tokens_) {
        h = util::fnv1a64(t, h);
        h = util::fnv1a64(std::string_view("\x1f", 1), h);
    }
    return h;
}

} // namespace kwcl::corpus
