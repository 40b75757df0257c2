#include "kwcl/keywords/embedding_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kwcl/keywords/stopwords.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::keywords {

EmbeddingTable load_embedding_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("embedding table: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("embedding table: empty file " + path);
    std::size_t count = 0;
    EmbeddingTable table;
    {
        std::istringstream header(line);
        if (!(header >> count >> table.dim) || table.dim == 0) {
            throw DataError("embedding table: bad header in " + path);
        }
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        if (!(row >> token)) {
            throw DataError("embedding table: bad row at " + path + ":" + std::to_string(line_no));
        }
        std::vector<double> vec(table.dim);
        for (std::size_t i = 0; i < table.dim; ++i) {
            if (!(row >> vec[i])) {
                throw DataError("embedding table: expected " + std::to_string(table.dim) +
                                      " components at " + path + ":" + std::to_string(line_no));
            }
            if (!std::isfinite(vec[i])) {
                throw DataError("embedding table: non-finite component at " + path + ":" +
                                      std::to_string(line_no));
            }
        }
        double extra;
        if (row >> extra) {
            throw DataError("embedding table: too many components at " + path + ":" +
                                  std::to_string(line_no));
        }
        if (!table.vectors.emplace(token, std::move(vec)).second) {
            throw DataError("embedding table: duplicate token '" + token + "' at " + path +
                                  ":" + std::to_string(line_no));
        }
    }
    if (table.vectors.size() != count) {
        throw DataError("embedding table: header declares " + std::to_string(count) +
                              " tokens, file has " + std::to_string(table.vectors.size()));
    }
    return table;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

KeywordList extract_embedding_sim(const std::string& domain,
                                  const std::vector<std::string>& texts,
                                  const EmbeddingTable& table, const EmbeddingSimConfig& cfg) {
    // Ordered counts: iteration order fixes the centroid summation order.
    std::map<std::string, std::size_t> counts;
    for (const std::string& text : texts) {
        for (std::string& t : corpus::tokenize(text, cfg.tokenizer)) {
            if (!is_stopword(t)) counts[std::move(t)] += 1;
        }
    }
    if (counts.empty()) throw DataError("embedding: no content tokens after stopword removal");

    std::size_t covered = 0;
    for (const auto& [word, c] : counts) {
        if (table.contains(word)) ++covered;
    }
    double coverage = static_cast<double>(covered) / static_cast<double>(counts.size());
    if (coverage < cfg.min_coverage) {
        std::ostringstream msg;
        msg << "embedding: table covers only " << coverage * 100.0
            << "% of content tokens (missing fraction " << (1.0 - coverage)
            << "), below the required " << cfg.min_coverage * 100.0 << "%";
        throw DataError(msg.str());
    }

    std::vector<double> centroid(table.dim, 0.0);
    double total_weight = 0.0;
    for (const auto& [word, c] : counts) {
        auto it = table.vectors.find(word);
        if (it == table.vectors.end()) continue;
        double w = cfg.freq_weighted_centroid ? static_cast<double>(c) : 1.0;
        for (std::size_t i = 0; i < table.dim; ++i) centroid[i] += w * it->second[i];
        total_weight += w;
    }
    for (double& v : centroid) v /= total_weight;
    double centroid_norm = std::sqrt(dot(centroid, centroid));
    if (centroid_norm == 0.0) throw DataError("embedding: centroid has zero norm");

    KeywordList list;
    list.domain = domain;
    for (const auto& [word, c] : counts) {
        auto it = table.vectors.find(word);
        if (it == table.vectors.end()) continue;
        double norm = std::sqrt(dot(it->second, it->second));
        double cosine = (norm == 0.0) ? 0.0 : dot(it->second, centroid) / (norm * centroid_norm);
        list.entries.push_back({word, std::max(0.0, cosine)});
    }
    sort_entries(list.entries);
    return list;
}

} // namespace kwcl::keywords
