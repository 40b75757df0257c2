#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/tokenizer.hpp"

namespace kwcl::corpus {

/// Token-to-index map with PAD=0 and UNK=1. Built from training and
/// unlabeled text only; test documents never contribute.
class Vocabulary {
public:
    static constexpr std::int32_t kPad = 0;
    static constexpr std::int32_t kUnk = 1;

    /// Tokens below min_freq are dropped; if more than max_size - 2 remain,
    /// the most frequent survive, ties broken lexicographically.
    static Vocabulary build(const MultiDomainDataset& dataset, const TokenizerConfig& tok,
                            std::size_t min_freq, std::size_t max_size);

    /// Rebuilds a vocabulary from an explicit token list (checkpoint loading).
    static Vocabulary from_tokens(const std::vector<std::string>& tokens);

    std::int32_t id(std::string_view token) const;
    const std::string& token(std::int32_t id) const { return tokens_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return tokens_.size(); }

    /// Tokens after PAD and UNK, in index order.
    std::vector<std::string> content_tokens() const;

    /// FNV-1a over all tokens in index order; checkpoint sidecars store it so
    /// evaluation can detect a mismatched vocabulary.
    std::uint64_t content_hash() const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::int32_t> index_;
};

} // namespace kwcl::corpus
