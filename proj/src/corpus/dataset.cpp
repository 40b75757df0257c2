#include "kwcl/corpus/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

MultiDomainDataset::MultiDomainDataset(std::vector<std::string> domains,
                                       std::vector<DomainData> data, int num_labels)
    : domains_(std::move(domains)), data_(std::move(data)), num_labels_(num_labels) {
    if (domains_.size() != data_.size()) {
        throw DataError("dataset: domain list and data blocks out of sync");
    }
}

std::size_t MultiDomainDataset::domain_index(std::string_view id) const {
    for (std::size_t i = 0; i < domains_.size(); ++i) {
        if (domains_[i] == id) return i;
    }
    throw DataError("unknown domain id: " + std::string(id));
}

std::vector<std::string_view> MultiDomainDataset::fit_texts(std::size_t i) const {
    std::vector<std::string_view> out;
    const DomainData& d = data_[i];
    out.reserve(d.train.size() + d.unlabeled.size());
    for (const Document& doc : d.train) out.push_back(doc.text);
    for (const Document& doc : d.unlabeled) out.push_back(doc.text);
    return out;
}

namespace {

std::vector<Document> read_jsonl(const fs::path& file, const std::string& domain, bool labeled,
                                 std::optional<int> num_labels) {
    std::vector<Document> docs;
    std::ifstream in(file);
    if (!in) return docs; // caller decides whether the file is required
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(file.string() + ":" + std::to_string(line_no) +
                            ": malformed JSONL line: " + e.what());
        }
        if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
            throw DataError(file.string() + ":" + std::to_string(line_no) +
                            ": expected an object with a string \"text\" field");
        }
        Document doc;
        doc.text = j["text"].get<std::string>();
        doc.domain = domain;
        if (labeled) {
            if (!j.contains("label") || !j["label"].is_number_integer()) {
                throw DataError(file.string() + ":" + std::to_string(line_no) +
                                ": labeled document without an integer \"label\"");
            }
            int label = j["label"].get<int>();
            if (label < 0 || (num_labels && label >= *num_labels)) {
                throw DataError(file.string() + ":" + std::to_string(line_no) + ": label " +
                                std::to_string(label) + " outside declared range [0, " +
                                (num_labels ? std::to_string(*num_labels) : std::string("?")) + ")");
            }
            doc.label = label;
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

} // namespace

MultiDomainDataset load_dataset(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw DataError("dataset root is not a directory: " + root.string());
    }

    std::vector<std::string> domains;
    std::optional<int> declared_labels;

    const fs::path manifest = root / "dataset.json";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw DataError(manifest.string() + ": malformed dataset manifest: " + e.what());
        }
        if (j.contains("domains")) {
            for (const auto& d : j["domains"]) domains.push_back(d.get<std::string>());
        }
        if (j.contains("num_labels")) declared_labels = j["num_labels"].get<int>();
    }
    if (domains.empty()) {
        for (const auto& entry : fs::directory_iterator(root)) {
            if (entry.is_directory()) domains.push_back(entry.path().filename().string());
        }
        std::sort(domains.begin(), domains.end());
    }
    if (domains.empty()) throw DataError("dataset has no domains: " + root.string());

    std::vector<DomainData> data;
    int max_label = -1;
    for (const std::string& domain : domains) {
        const fs::path dir = root / domain;
        if (!fs::is_directory(dir)) {
            throw DataError("missing domain directory: " + dir.string());
        }
        DomainData d;
        d.train = read_jsonl(dir / "train.jsonl", domain, true, declared_labels);
        if (d.train.empty()) {
            throw DataError("domain has no training documents: " + (dir / "train.jsonl").string());
        }
        d.test = read_jsonl(dir / "test.jsonl", domain, true, declared_labels);
        d.unlabeled = read_jsonl(dir / "unlabeled.jsonl", domain, false, declared_labels);
        for (const auto& doc : d.train) max_label = std::max(max_label, *doc.label);
        for (const auto& doc : d.test) max_label = std::max(max_label, *doc.label);
        data.push_back(std::move(d));
    }

    const int num_labels = declared_labels ? *declared_labels : max_label + 1;
    if (num_labels < 1) throw DataError("dataset declares no labels");
    return MultiDomainDataset(std::move(domains), std::move(data), num_labels);
}

MultiDomainDataset split_dataset(const MultiDomainDataset& dataset, double train_fraction,
                                 std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("split: train fraction must be in (0, 1)");
    }
    std::vector<DomainData> data;
    for (std::size_t i = 0; i < dataset.num_domains(); ++i) {
        const DomainData& src = dataset.domain_data(i);
        DomainData out;
        out.unlabeled = src.unlabeled;
        if (!src.test.empty()) {
            // A pre-made test split takes precedence over ratio splitting.
            out.train = src.train;
            out.test = src.test;
        } else {
            if (src.train.size() < 2) {
                throw DataError("split: domain '" + dataset.domains()[i] +
                                "' has fewer than 2 labeled documents");
            }
            auto rng = util::make_rng(util::subseed(seed, "split", dataset.domains()[i]));
            std::vector<std::size_t> order = util::permutation(src.train.size(), rng);
            const std::size_t n_train =
                static_cast<std::size_t>(train_fraction * static_cast<double>(src.train.size()));
            for (std::size_t j = 0; j < order.size(); ++j) {
                (j < n_train ? out.train : out.test).push_back(src.train[order[j]]);
            }
        }
        data.push_back(std::move(out));
    }
    return MultiDomainDataset(dataset.domains(), std::move(data), dataset.num_labels());
}

} // namespace kwcl::corpus
