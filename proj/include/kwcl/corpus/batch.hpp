#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/vocabulary.hpp"

namespace kwcl::corpus {

/// Token-index matrix for one mini-batch, PAD-filled to the longest sequence
/// in the batch (capped at max_len). Labeled batches carry labels.
struct TokenizedBatch {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int32_t> ids; // row-major
    std::vector<std::int32_t> lengths;
    std::optional<std::vector<std::int32_t>> labels;
    int domain_index = -1;

    std::int32_t at(std::size_t r, std::size_t c) const { return ids[r * cols + c]; }
};

struct BatchConfig {
    std::size_t batch_size = 16;
    std::size_t max_len = 256; // tail truncation
    TokenizerConfig tokenizer;
};

/// Seeded mini-batch source over one document set. Documents are tokenized
/// once at construction; each epoch is an independent seeded shuffle; the
/// final short batch is emitted.
class BatchStream {
public:
    BatchStream(const std::vector<Document>* docs, const Vocabulary* vocab, BatchConfig cfg,
                std::uint64_t seed, int domain_index);

    /// Batches of one epoch; identical for identical (seed, epoch).
    std::vector<TokenizedBatch> epoch(std::uint64_t epoch_index) const;

    /// Batch of explicit document positions, in the given order. Shared by
    /// epoch() and by sequential evaluation.
    TokenizedBatch make_batch(const std::vector<std::size_t>& doc_positions) const;

    bool empty() const { return token_ids_.empty(); }
    std::size_t num_documents() const { return token_ids_.size(); }
    std::size_t batches_per_epoch() const;

private:
    const std::vector<Document>* docs_;
    BatchConfig cfg_;
    std::uint64_t seed_;
    int domain_index_;
    std::vector<std::vector<std::int32_t>> token_ids_; // per document, truncated to max_len
    bool labeled_ = false;
};

/// Endless iterator: yields the batches of epoch 0, 1, ... in order,
/// reshuffling automatically when an epoch is exhausted. Holds private
/// cursor state; never shared between runs.
class BatchCursor {
public:
    explicit BatchCursor(BatchStream stream);

    const TokenizedBatch& next();
    std::uint64_t epochs_completed() const { return epoch_; }
    bool empty() const { return stream_.empty(); }

private:
    BatchStream stream_;
    std::vector<TokenizedBatch> current_;
    std::size_t pos_ = 0;
    std::uint64_t epoch_ = 0;
};

} // namespace kwcl::corpus
