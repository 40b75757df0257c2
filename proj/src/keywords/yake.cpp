#include "kwcl/keywords/yake.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "kwcl/keywords/stopwords.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::keywords {

namespace {

struct RawToken {
    std::string surface;
    std::string key; // lowercased identity
};

bool token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

/// Sentence split on [.!?\n], then alphanumeric-run tokens with case kept.
std::vector<std::vector<RawToken>> split_sentences(const std::string& text) {
    std::vector<std::vector<RawToken>> sentences;
    std::vector<RawToken> current;
    std::string surface;
    auto flush_token = [&] {
        if (surface.empty()) return;
        RawToken tok;
        tok.key.reserve(surface.size());
        for (unsigned char c : surface) {
            tok.key.push_back((c < 0x80) ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
        }
        tok.surface = std::move(surface);
        surface.clear();
        current.push_back(std::move(tok));
    };
    auto flush_sentence = [&] {
        flush_token();
        if (!current.empty()) sentences.push_back(std::move(current));
        current.clear();
    };
    for (unsigned char c : text) {
        if (token_byte(c)) {
            surface.push_back(static_cast<char>(c));
        } else if (c == '.' || c == '!' || c == '?' || c == '\n') {
            flush_sentence();
        } else {
            flush_token();
        }
    }
    flush_sentence();
    return sentences;
}

bool uppercase_initial(const std::string& surface) {
    return !surface.empty() && std::isupper(static_cast<unsigned char>(surface[0])) != 0;
}

bool all_caps(const std::string& surface) {
    if (surface.size() < 2) return false;
    for (unsigned char c : surface) {
        if (std::isupper(c) == 0) return false;
    }
    return true;
}

double median_of_sorted(const std::vector<std::size_t>& v) {
    const std::size_t n = v.size();
    if (n % 2 == 1) return static_cast<double>(v[n / 2]);
    return 0.5 * (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2]));
}

} // namespace

YakeAnalysis yake_term_stats(const std::vector<std::string>& texts, const YakeConfig& cfg) {
    if (cfg.window < 1) throw ConfigError("yake: window must be >= 1");
    YakeAnalysis out;

    struct NeighborSets {
        std::vector<std::string> left, right;
    };
    std::map<std::string, NeighborSets> neighbors;
    std::map<std::string, std::vector<std::size_t>> sentence_hits;

    std::size_t sentence_index = 0;
    for (const std::string& text : texts) {
        for (const std::vector<RawToken>& sentence : split_sentences(text)) {
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                const RawToken& tok = sentence[i];
                if (is_stopword(tok.key)) continue;
                YakeTermStats& st = out.terms[tok.key];
                st.tf += 1;
                if (i > 0 && uppercase_initial(tok.surface)) st.tf_upper += 1;
                if (all_caps(tok.surface)) st.tf_acronym += 1;
                sentence_hits[tok.key].push_back(sentence_index);
                NeighborSets& ns = neighbors[tok.key];
                // Window slots include stopwords: context is the raw sentence.
                std::size_t lo = (i >= cfg.window) ? i - cfg.window : 0;
                for (std::size_t j = lo; j < i; ++j) ns.left.push_back(sentence[j].key);
                std::size_t hi = std::min(sentence.size(), i + cfg.window + 1);
                for (std::size_t j = i + 1; j < hi; ++j) ns.right.push_back(sentence[j].key);
            }
            ++sentence_index;
        }
    }
    out.num_sentences = sentence_index;
    if (out.terms.empty()) throw DataError("yake: no candidate tokens after stopword removal");

    double sum = 0.0;
    for (const auto& [word, st] : out.terms) {
        sum += static_cast<double>(st.tf);
        out.max_tf = std::max(out.max_tf, st.tf);
    }
    const double n_terms = static_cast<double>(out.terms.size());
    out.mean_tf = sum / n_terms;
    double var = 0.0;
    for (const auto& [word, st] : out.terms) {
        double d = static_cast<double>(st.tf) - out.mean_tf;
        var += d * d;
    }
    out.stddev_tf = std::sqrt(var / n_terms);

    for (auto& [word, st] : out.terms) {
        std::vector<std::size_t>& hits = sentence_hits[word];
        std::sort(hits.begin(), hits.end());
        st.sentence_indices = hits;
        st.sentence_indices.erase(std::unique(st.sentence_indices.begin(), st.sentence_indices.end()),
                                  st.sentence_indices.end());

        NeighborSets& ns = neighbors[word];
        st.total_left = ns.left.size();
        st.total_right = ns.right.size();
        std::sort(ns.left.begin(), ns.left.end());
        st.distinct_left = static_cast<std::size_t>(
            std::distance(ns.left.begin(), std::unique(ns.left.begin(), ns.left.end())));
        std::sort(ns.right.begin(), ns.right.end());
        st.distinct_right = static_cast<std::size_t>(
            std::distance(ns.right.begin(), std::unique(ns.right.begin(), ns.right.end())));

        st.casing = static_cast<double>(std::max(st.tf_upper, st.tf_acronym)) /
                    (1.0 + std::log(static_cast<double>(st.tf)));
        // Median over all occurrence positions, duplicates included.
        st.position = std::log(std::log(3.0 + median_of_sorted(hits)));
        st.frequency = static_cast<double>(st.tf) / (out.mean_tf + out.stddev_tf);
        double dl = (st.total_left > 0)
                        ? static_cast<double>(st.distinct_left) / static_cast<double>(st.total_left)
                        : 0.0;
        double dr = (st.total_right > 0)
                        ? static_cast<double>(st.distinct_right) / static_cast<double>(st.total_right)
                        : 0.0;
        st.relatedness = 1.0 + (dl + dr) * static_cast<double>(st.tf) / static_cast<double>(out.max_tf);
        st.spread = static_cast<double>(st.sentence_indices.size()) /
                    static_cast<double>(out.num_sentences);
        st.score = st.relatedness * st.position /
                   (st.casing + st.frequency / st.relatedness + st.spread / st.relatedness);
    }
    return out;
}

double yake_weight(double score) {
    return 1.0 / (1.0 + score);
}

KeywordList extract_yake(const std::string& domain, const std::vector<std::string>& texts,
                         const YakeConfig& cfg) {
    YakeAnalysis analysis = yake_term_stats(texts, cfg);
    KeywordList list;
    list.domain = domain;
    list.entries.reserve(analysis.terms.size());
    for (const auto& [word, st] : analysis.terms) {
        list.entries.push_back({word, yake_weight(st.score)});
    }
    sort_entries(list.entries);
    if (cfg.max_candidates > 0 && list.entries.size() > cfg.max_candidates) {
        list.entries.resize(cfg.max_candidates);
    }
    return list;
}

} // namespace kwcl::keywords
