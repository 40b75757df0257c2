#include "kwcl/io/writers.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "kwcl/util/errors.hpp"

#include "json.hpp"

namespace kwcl::io {

using ordered_json = nlohmann::ordered_json;

std::string keyword_ranking_json(const keywords::DomainRanking& ranking,
                                 const std::vector<keywords::KeywordList>& lists, bool truncate) {
    std::map<std::string, const keywords::KeywordList*> by_domain;
    for (const keywords::KeywordList& list : lists) by_domain[list.domain] = &list;

    ordered_json doc;
    doc["extractor"] = ranking.extractor;
    doc["N"] = ranking.top_n;
    doc["domains"] = ordered_json::array();
    for (const keywords::RankedDomain& entry : ranking.entries) {
        auto it = by_domain.find(entry.domain);
        if (it == by_domain.end()) {
            throw DataError("writer: no keyword list for domain '" + entry.domain + "'");
        }
        ordered_json dom;
        dom["domain"] = entry.domain;
        dom["W"] = entry.weight_sum;
        dom["keywords"] = ordered_json::array();
        const std::vector<keywords::KeywordEntry>& entries = it->second->entries;
        std::size_t limit = truncate ? std::min(ranking.top_n, entries.size()) : entries.size();
        for (std::size_t j = 0; j < limit; ++j) {
            dom["keywords"].push_back({{"word", entries[j].word}, {"weight", entries[j].weight}});
        }
        doc["domains"].push_back(std::move(dom));
    }
    return doc.dump(2) + "\n";
}

std::string history_jsonl(const train::RunHistory& history) {
    std::ostringstream out;
    for (const train::StepMetrics& m : history.steps) {
        ordered_json line;
        line["type"] = "step";
        line["step"] = m.step;
        line["j_tc"] = m.j_tc;
        line["j_dd"] = m.j_dd;
        line["j_fs"] = m.j_fs;
        line["domains"] = ordered_json::array();
        for (const train::DomainStepLoss& d : m.per_domain) {
            line["domains"].push_back({{"domain", d.domain},
                                       {"classification", d.classification},
                                       {"discrimination", d.discrimination},
                                       {"disc_phase", d.disc_phase}});
        }
        out << line.dump() << "\n";
    }
    for (const train::EvalRecord& e : history.evals) {
        ordered_json line;
        line["type"] = "eval";
        line["step"] = e.step;
        line["accuracy"] = ordered_json::object();
        for (std::size_t i = 0; i < e.domains.size(); ++i) {
            line["accuracy"][e.domains[i]] = e.accuracy[i];
        }
        line["average"] = e.average;
        out << line.dump() << "\n";
    }
    return out.str();
}

std::string report_json(const train::CurriculumSchedule& schedule, std::uint64_t config_hash,
                        const train::EvalResult& eval, double lambda) {
    ordered_json doc;
    doc["schedule"] = schedule.order;
    doc["config_hash"] = hex64(config_hash);
    doc["accuracy"] = ordered_json::object();
    for (std::size_t i = 0; i < eval.domains.size(); ++i) {
        doc["accuracy"][eval.domains[i]] = eval.accuracy[i];
    }
    doc["average"] = eval.average;
    doc["lambda"] = lambda;
    doc["extractor"] = schedule.extractor;
    doc["N"] = schedule.top_n;
    return doc.dump(2) + "\n";
}

std::string checkpoint_sidecar_json(const model::ModelConfig& arch,
                                    const std::vector<std::string>& domains,
                                    std::size_t num_labels, const corpus::Vocabulary& vocab) {
    ordered_json doc;
    doc["architecture"] = {{"kernel_sizes", arch.kernel_sizes},
                           {"channels", arch.channels},
                           {"embed_dim", arch.embed_dim},
                           {"hidden", arch.hidden},
                           {"max_len", arch.max_len}};
    doc["domains"] = domains;
    doc["num_labels"] = num_labels;
    doc["lambda"] = arch.lambda;
    doc["vocab_hash"] = hex64(vocab.content_hash());
    doc["vocab_tokens"] = vocab.content_tokens();
    return doc.dump(2) + "\n";
}

std::uint64_t hash_bytes(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("writer: cannot open " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("writer: failed writing " + path.string());
}

} // namespace kwcl::io
