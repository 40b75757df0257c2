#include "kwcl/corpus/batch.hpp"

#include <algorithm>
#include <numeric>

#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::corpus {

BatchStream::BatchStream(const std::vector<Document>* docs, const Vocabulary* vocab,
                         BatchConfig cfg, std::uint64_t seed, int domain_index)
    : docs_(docs), cfg_(std::move(cfg)), seed_(seed), domain_index_(domain_index) {
    if (cfg_.batch_size == 0) throw ConfigError("batch: batch_size must be positive");
    if (cfg_.max_len == 0) throw ConfigError("batch: max_len must be positive");
    token_ids_.reserve(docs_->size());
    labeled_ = !docs_->empty();
    for (const Document& doc : *docs_) {
        std::vector<std::string> toks = tokenize(doc.text, cfg_.tokenizer);
        std::vector<std::int32_t> ids;
        ids.reserve(std::min(toks.size(), cfg_.max_len));
        for (const std::string& t : toks) {
            if (ids.size() == cfg_.max_len) break;
            ids.push_back(vocab->id(t));
        }
        // An all-PAD row would make the document invisible to the model.
        if (ids.empty()) ids.push_back(Vocabulary::kUnk);
        token_ids_.push_back(std::move(ids));
        if (!doc.label.has_value()) labeled_ = false;
    }
}

std::size_t BatchStream::batches_per_epoch() const {
    if (token_ids_.empty()) return 0;
    return (token_ids_.size() + cfg_.batch_size - 1) / cfg_.batch_size;
}

TokenizedBatch BatchStream::make_batch(const std::vector<std::size_t>& doc_positions) const {
    TokenizedBatch batch;
    batch.rows = doc_positions.size();
    batch.domain_index = domain_index_;
    std::size_t longest = 1;
    for (std::size_t p : doc_positions) longest = std::max(longest, token_ids_[p].size());
    batch.cols = longest;
    batch.ids.assign(batch.rows * batch.cols, Vocabulary::kPad);
    batch.lengths.resize(batch.rows);
    if (labeled_) batch.labels.emplace(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const std::vector<std::int32_t>& ids = token_ids_[doc_positions[r]];
        std::copy(ids.begin(), ids.end(), batch.ids.begin() + static_cast<std::ptrdiff_t>(r * batch.cols));
        batch.lengths[r] = static_cast<std::int32_t>(ids.size());
        if (labeled_) (*batch.labels)[r] = static_cast<std::int32_t>(*(*docs_)[doc_positions[r]].label);
    }
    return batch;
}

std::vector<TokenizedBatch> BatchStream::epoch(std::uint64_t epoch_index) const {
    std::vector<std::size_t> order(token_ids_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = util::make_rng(util::subseed(seed_, "shuffle", std::to_string(domain_index_), epoch_index));
    util::shuffle(order, rng);

    std::vector<TokenizedBatch> batches;
    batches.reserve(batches_per_epoch());
    for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
        std::size_t end = std::min(order.size(), start + cfg_.batch_size);
        std::vector<std::size_t> slice(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(end));
        batches.push_back(make_batch(slice));
    }
    return batches;
}

BatchCursor::BatchCursor(BatchStream stream) : stream_(std::move(stream)) {
    if (!stream_.empty()) current_ = stream_.epoch(0);
}

const TokenizedBatch& BatchCursor::next() {
    if (stream_.empty()) throw DataError("batch: cursor over empty document set");
    if (pos_ == current_.size()) {
        ++epoch_;
        current_ = stream_.epoch(epoch_);
        pos_ = 0;
    }
    return current_[pos_++];
}

} // namespace kwcl::corpus
