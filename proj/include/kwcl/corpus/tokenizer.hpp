#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kwcl::corpus {

struct TokenizerConfig {
    bool lowercase = true;
};

/// Splits on runs of non-alphanumeric characters. ASCII letters and digits
/// are token characters, as is every byte >= 0x80, so multi-byte UTF-8
/// sequences stay inside tokens. Lowercasing is ASCII-only. Deterministic;
/// never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg = {});

} // namespace kwcl::corpus
