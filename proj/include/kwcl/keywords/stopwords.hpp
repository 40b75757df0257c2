#pragma once

#include <string>
#include <unordered_set>

namespace kwcl::keywords {

/// Fixed English stopword list, embedded so results never depend on
/// files outside the repository.
const std::unordered_set<std::string>& english_stopwords();

bool is_stopword(const std::string& token);

} // namespace kwcl::keywords
