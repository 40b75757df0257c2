#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kwcl::corpus {

struct Document {
    std::string text;
    std::optional<int> label; // absent for unlabeled samples
    std::string domain;
};

struct DomainData {
    std::vector<Document> train;
    std::vector<Document> test;
    std::vector<Document> unlabeled;
};

/// All documents of every domain, immutable after load. Train and test sets
/// are disjoint; unlabeled sets may be empty.
class MultiDomainDataset {
public:
    MultiDomainDataset() = default;
    MultiDomainDataset(std::vector<std::string> domains, std::vector<DomainData> data, int num_labels);

    const std::vector<std::string>& domains() const { return domains_; }
    std::size_t num_domains() const { return domains_.size(); }
    int num_labels() const { return num_labels_; }

    const DomainData& domain_data(std::size_t i) const { return data_[i]; }
    DomainData& domain_data(std::size_t i) { return data_[i]; }

    /// Index of a domain id; throws DataError for unknown ids.
    std::size_t domain_index(std::string_view id) const;

    /// Training and unlabeled text of one domain. Test text is deliberately
    /// unreachable through this accessor; vocabulary construction and keyword
    /// extraction go through here.
    std::vector<std::string_view> fit_texts(std::size_t i) const;

private:
    std::vector<std::string> domains_;
    std::vector<DomainData> data_;
    int num_labels_ = 0;
};

/// Loads the on-disk layout:
///   <root>/dataset.json                  {"domains": [...], "num_labels": n}
///   <root>/<domain>/train.jsonl          {"text": ..., "label": ...} per line
///   <root>/<domain>/test.jsonl           optional
///   <root>/<domain>/unlabeled.jsonl      optional, no "label" field
/// Without dataset.json, domains are the subdirectories in lexicographic
/// order and num_labels is inferred from the largest label seen.
MultiDomainDataset load_dataset(const std::filesystem::path& root);

/// Carves a per-domain test split out of the training documents for every
/// domain that has no pre-made test set: floor(ratio * n) documents stay in
/// train, the rest move to test. Shuffling is seeded per domain, so the
/// result does not depend on domain order.
MultiDomainDataset split_dataset(const MultiDomainDataset& dataset, double train_fraction,
                                 std::uint64_t seed);

} // namespace kwcl::corpus
