#include "kwcl/keywords/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kwcl/keywords/stopwords.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::keywords {

void sort_entries(std::vector<KeywordEntry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const KeywordEntry& a, const KeywordEntry& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.word < b.word;
    });
}

namespace {

std::vector<std::string> content_tokens(const std::string& text, const corpus::TokenizerConfig& tok) {
    std::vector<std::string> out;
    for (std::string& t : corpus::tokenize(text, tok)) {
        if (!is_stopword(t)) out.push_back(std::move(t));
    }
    return out;
}

} // namespace

CooccurrenceGraph build_cooccurrence_graph(const std::vector<std::string>& texts,
                                           const TextRankConfig& cfg) {
    if (cfg.window < 2) throw ConfigError("textrank: window must be >= 2");
    // Ordered map keeps node ids independent of hash seeding.
    std::map<std::string, std::size_t> node_of;
    std::vector<std::vector<std::string>> sequences;
    sequences.reserve(texts.size());
    for (const std::string& text : texts) {
        std::vector<std::string> seq = content_tokens(text, cfg.tokenizer);
        for (const std::string& t : seq) node_of.emplace(t, 0);
        sequences.push_back(std::move(seq));
    }
    if (node_of.empty()) throw DataError("textrank: no content tokens after stopword removal");

    CooccurrenceGraph graph;
    graph.nodes.reserve(node_of.size());
    for (auto& [word, id] : node_of) {
        id = graph.nodes.size();
        graph.nodes.push_back(word);
    }
    graph.adjacency.assign(graph.nodes.size(), {});

    for (const std::vector<std::string>& seq : sequences) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            std::size_t a = node_of[seq[i]];
            std::size_t hi = std::min(seq.size(), i + cfg.window);
            for (std::size_t j = i + 1; j < hi; ++j) {
                std::size_t b = node_of[seq[j]];
                if (a == b) continue;
                graph.adjacency[a].push_back(b);
                graph.adjacency[b].push_back(a);
            }
        }
    }
    for (std::vector<std::size_t>& adj : graph.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return graph;
}

std::vector<double> pagerank_scores(const CooccurrenceGraph& graph, double damping,
                                    std::size_t max_iters, double tol) {
    if (damping <= 0.0 || damping >= 1.0) throw ConfigError("textrank: damping must be in (0,1)");
    const std::size_t n = graph.size();
    std::vector<double> score(n, 1.0);
    std::vector<double> next(n, 0.0);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double max_delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t u : graph.adjacency[v]) {
                acc += score[u] / static_cast<double>(graph.adjacency[u].size());
            }
            next[v] = (1.0 - damping) + damping * acc;
            max_delta = std::max(max_delta, std::abs(next[v] - score[v]));
        }
        score.swap(next);
        if (max_delta <= tol) break;
    }
    return score;
}

KeywordList extract_textrank(const std::string& domain, const std::vector<std::string>& texts,
                             const TextRankConfig& cfg) {
    CooccurrenceGraph graph = build_cooccurrence_graph(texts, cfg);
    std::vector<double> scores = pagerank_scores(graph, cfg.damping, cfg.max_iters, cfg.tol);
    KeywordList list;
    list.domain = domain;
    list.entries.reserve(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v) {
        list.entries.push_back({graph.nodes[v], scores[v]});
    }
    sort_entries(list.entries);
    return list;
}

} // namespace kwcl::keywords
