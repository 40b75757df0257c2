#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"

#include "kwcl/corpus/tokenizer.hpp"
#include "kwcl/util/rng.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using kwcl::corpus::Document;
using kwcl::corpus::DomainData;
using kwcl::corpus::MultiDomainDataset;

namespace {

struct RawDoc {
    const char* text;
    int label; // -1 = unlabeled
};

const RawDoc kBooksTrain[] = {
    {"A wonderful novel with a heartfelt story. Highly recommended reading!", 1},
    {"The plot dragged and the characters felt flat.", 0},
    {"Beautiful prose; I could not put this book down.", 1},
    {"An inspiring memoir, honest and moving.", 1},
    {"Dull chapters and a predictable ending ruined it for me.", 0},
    {"Great worldbuilding and a satisfying finale.", 1},
};
const RawDoc kBooksTest[] = {
    {"Shallow writing, I returned the book.", 0},
    {"A gripping thriller from the first page.", 1},
    {"The pacing was terrible and the dialogue worse.", 0},
    {"Lovely illustrations and a charming tale.", 1},
};
const RawDoc kBooksUnlabeled[] = {
    {"The paperback arrived quickly.", -1},
    {"Hardcover edition with a new foreword.", -1},
};
const RawDoc kDvdTrain[] = {
    {"Fantastic movie, the acting was superb!", 1},
    {"Terrible film; the plot made no sense.", 0},
    {"A thrilling ride with stunning visuals.", 1},
    {"Boring scenes and wooden performances.", 0},
    {"The director delivered a masterpiece.", 1},
    {"Weak script, awful soundtrack, skip it.", 0},
    {"Classic cinema restored beautifully on this disc.", 1},
};
const RawDoc kDvdTest[] = {
    {"The sequel disappoints on every level.", 0},
    {"An unforgettable performance by the entire cast.", 1},
    {"Blurry transfer and muddy audio mix.", 0},
};

void write_jsonl(const fs::path& file, const RawDoc* docs, std::size_t count) {
    std::ofstream out(file, std::ios::binary);
    for (std::size_t i = 0; i < count; ++i) {
        nlohmann::json line;
        line["text"] = docs[i].text;
        if (docs[i].label >= 0) line["label"] = docs[i].label;
        out << line.dump() << "\n";
    }
}

void write_manifest(const fs::path& root, const std::vector<std::string>& domains, int num_labels) {
    nlohmann::json doc;
    doc["domains"] = domains;
    doc["num_labels"] = num_labels;
    std::ofstream out(root / "dataset.json", std::ios::binary);
    out << doc.dump(2) << "\n";
}

std::string pad_number(std::size_t value, int width) {
    std::ostringstream out;
    out << std::setw(width) << std::setfill('0') << value;
    return out.str();
}

} // namespace

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::ostringstream name;
    name << "kwcl-test-" << tag << "-" << ::getpid() << "-" << counter.fetch_add(1);
    path_ = fs::temp_directory_path() / name.str();
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

const std::map<std::string, ManifestCounts>& tiny_manifest() {
    // Tallied by hand from the arrays above.
    static const std::map<std::string, ManifestCounts> manifest = {
        {"books", {6, 4, 2, 4, 2, 2, 2}},
        {"dvd", {7, 3, 0, 4, 3, 1, 2}},
    };
    return manifest;
}

std::vector<std::string> tiny_all_texts() {
    std::vector<std::string> out;
    for (const RawDoc& d : kBooksTrain) out.push_back(d.text);
    for (const RawDoc& d : kBooksTest) out.push_back(d.text);
    for (const RawDoc& d : kBooksUnlabeled) out.push_back(d.text);
    for (const RawDoc& d : kDvdTrain) out.push_back(d.text);
    for (const RawDoc& d : kDvdTest) out.push_back(d.text);
    return out;
}

void write_tiny_corpus(const fs::path& root) {
    fs::create_directories(root / "books");
    fs::create_directories(root / "dvd");
    write_manifest(root, {"books", "dvd"}, 2);
    write_jsonl(root / "books" / "train.jsonl", kBooksTrain, std::size(kBooksTrain));
    write_jsonl(root / "books" / "test.jsonl", kBooksTest, std::size(kBooksTest));
    write_jsonl(root / "books" / "unlabeled.jsonl", kBooksUnlabeled, std::size(kBooksUnlabeled));
    write_jsonl(root / "dvd" / "train.jsonl", kDvdTrain, std::size(kDvdTrain));
    write_jsonl(root / "dvd" / "test.jsonl", kDvdTest, std::size(kDvdTest));
}

void write_mini_corpus(const fs::path& root) {
    static const RawDoc books[] = {
        {"An excellent story from start to finish.", 1},
        {"I could not finish this tedious novel.", 0},
        {"A moving and memorable read.", 1},
        {"Flat characters and clumsy prose.", 0},
    };
    static const RawDoc dvd[] = {
        {"A stunning film with a perfect cast.", 1},
        {"The worst movie I have seen this year.", 0},
        {"Gorgeous cinematography and sharp editing.", 1},
        {"Cheap effects and a lazy script.", 0},
    };
    fs::create_directories(root / "books");
    fs::create_directories(root / "dvd");
    write_manifest(root, {"books", "dvd"}, 2);
    write_jsonl(root / "books" / "train.jsonl", books, std::size(books));
    write_jsonl(root / "dvd" / "train.jsonl", dvd, std::size(dvd));
}

void write_dataset_layout(const fs::path& root, const MultiDomainDataset& dataset) {
    write_manifest(root, dataset.domains(), dataset.num_labels());
    for (std::size_t i = 0; i < dataset.num_domains(); ++i) {
        const std::string& domain = dataset.domains()[i];
        fs::create_directories(root / domain);
        const DomainData& dd = dataset.domain_data(i);
        auto dump = [&](const fs::path& file, const std::vector<Document>& docs) {
            if (docs.empty()) return;
            std::ofstream out(file, std::ios::binary);
            for (const Document& doc : docs) {
                nlohmann::json line;
                line["text"] = doc.text;
                if (doc.label) line["label"] = *doc.label;
                out << line.dump() << "\n";
            }
        };
        dump(root / domain / "train.jsonl", dd.train);
        dump(root / domain / "test.jsonl", dd.test);
        dump(root / domain / "unlabeled.jsonl", dd.unlabeled);
    }
}

PlantedConfig small_planted() {
    PlantedConfig cfg;
    cfg.train_per_domain = 60;
    cfg.test_per_domain = 20;
    cfg.unlabeled_per_domain = 20;
    cfg.gadget_pool = 12;
    cfg.junk_pool = 60;
    cfg.story_pool = 96;
    cfg.class_pool = 20;
    return cfg;
}

namespace {

std::string planted_doc(std::mt19937_64& rng, const PlantedConfig& cfg, bool gadgets, int label) {
    std::vector<std::string> tokens;
    tokens.reserve(cfg.domain_tokens_per_doc + cfg.junk_per_doc + cfg.class_tokens_per_doc);
    for (std::size_t j = 0; j < cfg.domain_tokens_per_doc; ++j) {
        if (gadgets) {
            tokens.push_back("gizmo" + pad_number(kwcl::util::bounded(rng, cfg.gadget_pool), 2));
        } else {
            tokens.push_back("tale" + pad_number(kwcl::util::bounded(rng, cfg.story_pool), 3));
        }
    }
    if (gadgets) {
        for (std::size_t j = 0; j < cfg.junk_per_doc; ++j) {
            tokens.push_back("part" + pad_number(kwcl::util::bounded(rng, cfg.junk_pool), 3));
        }
    }
    for (std::size_t j = 0; j < cfg.class_tokens_per_doc; ++j) {
        std::size_t pick = kwcl::util::bounded(rng, cfg.class_pool);
        tokens.push_back((label == 1 ? "plus" : "minus") + pad_number(pick, 2));
    }
    kwcl::util::shuffle(tokens, rng);

    std::string text;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
        if (j > 0) text += (j % cfg.sentence_len == 0) ? ". " : " ";
        text += tokens[j];
    }
    text += ".";
    return text;
}

} // namespace

MultiDomainDataset make_planted_dataset(const PlantedConfig& cfg) {
    std::vector<std::string> domains = {"gadgets", "novels"};
    std::vector<DomainData> data(2);
    for (std::size_t di = 0; di < 2; ++di) {
        const bool gadgets = (di == 0);
        std::mt19937_64 rng(cfg.seed + di * 1000003ull);
        DomainData& dd = data[di];
        for (std::size_t i = 0; i < cfg.train_per_domain; ++i) {
            int label = static_cast<int>(i % 2);
            dd.train.push_back({planted_doc(rng, cfg, gadgets, label), label, domains[di]});
        }
        for (std::size_t i = 0; i < cfg.test_per_domain; ++i) {
            int label = static_cast<int>(i % 2);
            dd.test.push_back({planted_doc(rng, cfg, gadgets, label), label, domains[di]});
        }
        for (std::size_t i = 0; i < cfg.unlabeled_per_domain; ++i) {
            int label = static_cast<int>(kwcl::util::bounded(rng, 2));
            dd.unlabeled.push_back({planted_doc(rng, cfg, gadgets, label), std::nullopt, domains[di]});
        }
    }
    return MultiDomainDataset(std::move(domains), std::move(data), 2);
}

std::string planted_embedding_text(const PlantedConfig& cfg) {
    const std::size_t dim = 32;
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < cfg.gadget_pool; ++i) tokens.push_back("gizmo" + pad_number(i, 2));
    for (std::size_t i = 0; i < cfg.junk_pool; ++i) tokens.push_back("part" + pad_number(i, 3));
    for (std::size_t i = 0; i < cfg.story_pool; ++i) tokens.push_back("tale" + pad_number(i, 3));
    for (std::size_t i = 0; i < cfg.class_pool; ++i) tokens.push_back("plus" + pad_number(i, 2));
    for (std::size_t i = 0; i < cfg.class_pool; ++i) tokens.push_back("minus" + pad_number(i, 2));

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    const double base = 1.0 / std::sqrt(static_cast<double>(dim));
    std::ostringstream out;
    out << tokens.size() << " " << dim << "\n";
    out << std::setprecision(10);
    for (const std::string& token : tokens) {
        const bool clustered = token.rfind("gizmo", 0) == 0;
        std::vector<double> v(dim);
        double norm = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            v[j] = clustered ? base + 0.08 * kwcl::util::normal(rng) : kwcl::util::normal(rng);
            norm += v[j] * v[j];
        }
        norm = std::sqrt(norm);
        out << token;
        for (std::size_t j = 0; j < dim; ++j) out << " " << v[j] / norm;
        out << "\n";
    }
    return out.str();
}

double bow_probe_accuracy(const MultiDomainDataset& dataset) {
    kwcl::corpus::TokenizerConfig tok;
    std::map<std::string, std::size_t> index;
    struct Sample {
        std::map<std::size_t, double> counts;
        int label;
    };
    std::vector<Sample> train;
    std::vector<Sample> test;

    auto featurize = [&](const Document& doc, bool grow) {
        Sample s;
        s.label = doc.label.value_or(0);
        for (const std::string& t : kwcl::corpus::tokenize(doc.text, tok)) {
            auto it = index.find(t);
            if (it == index.end()) {
                if (!grow) continue;
                it = index.emplace(t, index.size()).first;
            }
            s.counts[it->second] += 1.0;
        }
        return s;
    };
    for (std::size_t i = 0; i < dataset.num_domains(); ++i) {
        for (const Document& d : dataset.domain_data(i).train) train.push_back(featurize(d, true));
        for (const Document& d : dataset.domain_data(i).test) test.push_back(featurize(d, false));
    }

    std::vector<double> w(index.size(), 0.0);
    double b = 0.0;
    const double lr = 2.0;
    const double n = static_cast<double>(train.size());
    for (int iter = 0; iter < 400; ++iter) {
        std::vector<double> gw(w.size(), 0.0);
        double gb = 0.0;
        for (const Sample& s : train) {
            double z = b;
            for (const auto& [j, c] : s.counts) z += w[j] * c;
            double p = 1.0 / (1.0 + std::exp(-z));
            double err = p - static_cast<double>(s.label);
            for (const auto& [j, c] : s.counts) gw[j] += err * c;
            gb += err;
        }
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= lr * gw[j] / n;
        b -= lr * gb / n;
    }

    std::size_t correct = 0;
    for (const Sample& s : test) {
        double z = b;
        for (const auto& [j, c] : s.counts) z += w[j] * c;
        if ((z > 0.0 ? 1 : 0) == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

} // namespace testsupport
