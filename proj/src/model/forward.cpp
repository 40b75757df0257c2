#include "kwcl/model/forward.hpp"

#include <algorithm>

#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::model {

using nn::Tape;

nn::IndexMatrix padded_ids(const ModelBundle& bundle, const corpus::TokenizedBatch& batch) {
    if (batch.rows == 0) throw DataError("model: empty batch");
    nn::IndexMatrix m;
    m.rows = batch.rows;
    m.cols = std::max(batch.cols, bundle.config().largest_kernel());
    m.ids.assign(m.rows * m.cols, corpus::Vocabulary::kPad);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        for (std::size_t c = 0; c < batch.cols; ++c) {
            m.ids[r * m.cols + c] = batch.at(r, c);
        }
    }
    return m;
}

Tape::NodeId bank_features(Tape& tape, ModelBundle& bundle, const std::string& prefix,
                           const corpus::TokenizedBatch& batch) {
    const ModelConfig& cfg = bundle.config();
    nn::IndexMatrix ids = padded_ids(bundle, batch);
    Tape::NodeId table = tape.parameter(bundle.param("embedding.table"));
    Tape::NodeId emb = tape.embedding_lookup(table, ids);

    Tape::NodeId features = 0;
    bool first = true;
    for (std::size_t k : cfg.kernel_sizes) {
        Tape::NodeId kernel =
            tape.parameter(bundle.param(prefix + ".conv" + std::to_string(k) + ".kernel"));
        Tape::NodeId bias =
            tape.parameter(bundle.param(prefix + ".conv" + std::to_string(k) + ".bias"));
        Tape::NodeId conv = tape.conv1d(emb, kernel, bias);
        Tape::NodeId act = tape.relu(conv);
        // Valid conv positions for a row of length len: len - k + 1, at least
        // one (short rows see their tokens plus zero padding at position 0).
        const std::size_t t = ids.cols - k + 1;
        std::vector<std::int32_t> valid(batch.rows);
        for (std::size_t r = 0; r < batch.rows; ++r) {
            std::int64_t v = static_cast<std::int64_t>(batch.lengths[r]) -
                             static_cast<std::int64_t>(k) + 1;
            v = std::clamp<std::int64_t>(v, 1, static_cast<std::int64_t>(t));
            valid[r] = static_cast<std::int32_t>(v);
        }
        Tape::NodeId pooled = tape.global_max_pool(act, valid);
        features = first ? pooled : tape.concat(features, pooled);
        first = false;
    }
    return features;
}

Tape::NodeId shared_features(Tape& tape, ModelBundle& bundle, const corpus::TokenizedBatch& batch) {
    return bank_features(tape, bundle, "shared", batch);
}

Tape::NodeId private_features(Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                              const corpus::TokenizedBatch& batch) {
    if (domain_index >= bundle.num_domains()) {
        throw ConfigError("model: domain index " + std::to_string(domain_index) +
                                " out of range");
    }
    return bank_features(tape, bundle, "private." + bundle.domains()[domain_index], batch);
}

namespace {

Tape::NodeId mlp2(Tape& tape, ModelBundle& bundle, const std::string& prefix, Tape::NodeId input) {
    Tape::NodeId h = tape.linear(input, tape.parameter(bundle.param(prefix + ".fc1.weight")),
                                 tape.parameter(bundle.param(prefix + ".fc1.bias")));
    Tape::NodeId act = tape.relu(h);
    return tape.linear(act, tape.parameter(bundle.param(prefix + ".fc2.weight")),
                       tape.parameter(bundle.param(prefix + ".fc2.bias")));
}

} // namespace

Tape::NodeId classify_logits_from(Tape& tape, ModelBundle& bundle, Tape::NodeId shared,
                                  Tape::NodeId priv) {
    Tape::NodeId both = tape.concat(shared, priv); // shared first
    return mlp2(tape, bundle, "classifier", both);
}

Tape::NodeId classify_logits(Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                             const corpus::TokenizedBatch& batch) {
    Tape::NodeId shared = shared_features(tape, bundle, batch);
    Tape::NodeId priv = private_features(tape, bundle, domain_index, batch);
    return classify_logits_from(tape, bundle, shared, priv);
}

Tape::NodeId discriminate_logits(Tape& tape, ModelBundle& bundle, Tape::NodeId features) {
    return mlp2(tape, bundle, "discriminator", features);
}

nn::Tensor shared_forward(ModelBundle& bundle, const corpus::TokenizedBatch& batch) {
    Tape tape;
    return tape.value(shared_features(tape, bundle, batch));
}

nn::Tensor classify(ModelBundle& bundle, std::size_t domain_index,
                    const corpus::TokenizedBatch& batch) {
    Tape tape;
    return tape.value(classify_logits(tape, bundle, domain_index, batch));
}

nn::Tensor discriminate(ModelBundle& bundle, const corpus::TokenizedBatch& batch) {
    Tape tape;
    return tape.value(discriminate_logits(tape, bundle, shared_features(tape, bundle, batch)));
}

} // namespace kwcl::model
