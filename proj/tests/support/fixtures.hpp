#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kwcl/corpus/dataset.hpp"

namespace testsupport {

/// Self-deleting unique directory under the system temp root.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Hand-tallied counts for the tiny fixture corpus. The numbers are written
/// down independently of the loader; tests compare the loaded dataset
/// against them.
struct ManifestCounts {
    std::size_t train = 0;
    std::size_t test = 0;
    std::size_t unlabeled = 0;
    std::size_t train_pos = 0; // label 1
    std::size_t train_neg = 0; // label 0
    std::size_t test_pos = 0;
    std::size_t test_neg = 0;
};

/// 20 labeled documents over domains {books, dvd} plus 2 unlabeled book
/// reviews, with a hand-written manifest.
const std::map<std::string, ManifestCounts>& tiny_manifest();

/// Every text of the tiny corpus (train, test, unlabeled), for token counts.
std::vector<std::string> tiny_all_texts();

void write_tiny_corpus(const std::filesystem::path& root);

/// Minimal layout: domains {books, dvd}, 4 labeled training docs each,
/// no test or unlabeled files.
void write_mini_corpus(const std::filesystem::path& root);

/// Serializes any in-memory dataset to the on-disk layout (dataset.json plus
/// per-domain JSONL files).
void write_dataset_layout(const std::filesystem::path& root,
                          const kwcl::corpus::MultiDomainDataset& dataset);

/// Two-domain corpus with planted vocabulary. Domain "gadgets" draws its
/// domain tokens from a small hub pool with heavy repetition (obvious
/// keywords) plus a sprinkle of rare one-off tokens; domain "novels" draws
/// from a large pool with flat counts (diffuse keywords). Class identity is
/// carried by disjoint token pools shared by both domains, so the label is
/// linearly separable from bag-of-words while the domain ranking favors
/// "gadgets" for every extractor.
struct PlantedConfig {
    std::size_t train_per_domain = 400;
    std::size_t test_per_domain = 100;
    std::size_t unlabeled_per_domain = 100;
    std::size_t gadget_pool = 30;   // "gizmoNN", hubs
    std::size_t junk_pool = 300;    // "partNNN", rare tail, gadgets only
    std::size_t story_pool = 240;   // "taleNNN"
    std::size_t class_pool = 60;    // per label: "plusNN" / "minusNN"
    std::size_t domain_tokens_per_doc = 10;
    std::size_t junk_per_doc = 2;
    std::size_t class_tokens_per_doc = 5;
    std::size_t sentence_len = 5;
    std::uint64_t seed = 20260819;
};

/// Unit-scale variant of the planted corpus, a few seconds to train on.
PlantedConfig small_planted();

kwcl::corpus::MultiDomainDataset make_planted_dataset(const PlantedConfig& cfg = {});

/// Embedding table covering the full planted vocabulary: gadget tokens form
/// a tight cluster around one direction, all other tokens are independent
/// random unit vectors.
std::string planted_embedding_text(const PlantedConfig& cfg = {});

/// Independent separability gate: logistic regression on raw bag-of-words
/// counts, trained on the pooled train split, accuracy on the pooled test
/// split. Run before trusting any model-based accuracy criterion.
double bow_probe_accuracy(const kwcl::corpus::MultiDomainDataset& dataset);

} // namespace testsupport
