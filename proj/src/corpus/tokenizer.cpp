#include "kwcl/corpus/tokenizer.hpp"

namespace kwcl::corpus {

namespace {

inline bool is_token_char(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline char fold(char c, bool lowercase) {
    if (lowercase && c >= 'A' && c <= 'Z') return static_cast<char>(c + ('a' - 'A'));
    return c;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        if (is_token_char(static_cast<unsigned char>(raw))) {
            current.push_back(fold(raw, cfg.lowercase));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace kwcl::corpus
