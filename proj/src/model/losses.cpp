#include "kwcl/model/losses.hpp"

#include "kwcl/model/forward.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::model {

using nn::Tape;

std::vector<std::int32_t> domain_targets(const corpus::TokenizedBatch& batch) {
    if (batch.domain_index < 0) throw DataError("loss: batch carries no domain index");
    return std::vector<std::int32_t>(batch.rows, batch.domain_index);
}

namespace {

void check_domain(const ModelBundle& bundle, const corpus::TokenizedBatch& batch) {
    if (batch.domain_index < 0 ||
        static_cast<std::size_t>(batch.domain_index) >= bundle.num_domains()) {
        throw DataError("loss: batch domain index " + std::to_string(batch.domain_index) +
                              " does not name a model domain");
    }
}

Tape::NodeId accumulate(Tape& tape, Tape::NodeId total, Tape::NodeId term, bool first) {
    return first ? term : tape.add(total, term);
}

} // namespace

Tape::NodeId loss_dd(Tape& tape, ModelBundle& bundle,
                     const std::vector<const corpus::TokenizedBatch*>& batches,
                     nn::Reduction reduction, bool detach_shared) {
    if (bundle.num_domains() == 1) {
        return tape.constant(nn::Tensor::scalar(0.0));
    }
    if (batches.empty()) throw DataError("loss: no batches for the discriminator objective");
    Tape::NodeId total = 0;
    bool first = true;
    for (const corpus::TokenizedBatch* batch : batches) {
        check_domain(bundle, *batch);
        Tape::NodeId features;
        if (detach_shared) {
            features = tape.constant(shared_forward(bundle, *batch));
        } else {
            features = shared_features(tape, bundle, *batch);
        }
        Tape::NodeId logits = discriminate_logits(tape, bundle, features);
        Tape::NodeId ce = tape.cross_entropy(logits, domain_targets(*batch), reduction);
        total = accumulate(tape, total, ce, first);
        first = false;
    }
    return total;
}

Tape::NodeId loss_tc(Tape& tape, ModelBundle& bundle,
                     const std::vector<const corpus::TokenizedBatch*>& batches,
                     nn::Reduction reduction) {
    if (batches.empty()) throw DataError("loss: no batches for the classification objective");
    Tape::NodeId total = 0;
    bool first = true;
    for (const corpus::TokenizedBatch* batch : batches) {
        check_domain(bundle, *batch);
        if (!batch->labels.has_value()) {
            throw DataError("loss: unlabeled batch reached the classification objective");
        }
        Tape::NodeId logits =
            classify_logits(tape, bundle, static_cast<std::size_t>(batch->domain_index), *batch);
        Tape::NodeId ce = tape.cross_entropy(logits, *batch->labels, reduction);
        total = accumulate(tape, total, ce, first);
        first = false;
    }
    return total;
}

Tape::NodeId loss_fsi(Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                      const corpus::TokenizedBatch& batch, nn::Reduction reduction) {
    check_domain(bundle, batch);
    if (static_cast<std::size_t>(batch.domain_index) != domain_index) {
        throw DataError("loss: batch from domain " + std::to_string(batch.domain_index) +
                              " passed to extractor " + std::to_string(domain_index));
    }
    return loss_tc(tape, bundle, {&batch}, reduction);
}

SharedLoss shared_extractor_loss(Tape& tape, ModelBundle& bundle,
                                 const std::vector<const corpus::TokenizedBatch*>& batches,
                                 nn::Reduction reduction, double lambda) {
    if (lambda <= 0.0) throw ConfigError("loss: lambda must be > 0");
    if (batches.empty()) throw DataError("loss: no batches for the shared objective");

    SharedLoss out;
    out.has_discrimination = bundle.num_domains() > 1;
    Tape::NodeId tc = 0, dd = 0;
    bool first = true;
    for (const corpus::TokenizedBatch* batch : batches) {
        check_domain(bundle, *batch);
        if (!batch->labels.has_value()) {
            throw DataError("loss: unlabeled batch reached the shared objective");
        }
        std::size_t i = static_cast<std::size_t>(batch->domain_index);
        Tape::NodeId shared = shared_features(tape, bundle, *batch);
        Tape::NodeId priv = private_features(tape, bundle, i, *batch);
        Tape::NodeId class_logits = classify_logits_from(tape, bundle, shared, priv);
        Tape::NodeId tc_term = tape.cross_entropy(class_logits, *batch->labels, reduction);
        tc = accumulate(tape, tc, tc_term, first);
        if (out.has_discrimination) {
            Tape::NodeId disc_logits = discriminate_logits(tape, bundle, shared);
            Tape::NodeId dd_term = tape.cross_entropy(disc_logits, domain_targets(*batch), reduction);
            dd = accumulate(tape, dd, dd_term, first);
        }
        first = false;
    }
    out.classification = tc;
    if (out.has_discrimination) {
        out.discrimination = dd;
        out.combined = tape.add(tc, tape.scale(dd, -lambda));
    } else {
        out.discrimination = tape.constant(nn::Tensor::scalar(0.0));
        out.combined = tc;
    }
    return out;
}

} // namespace kwcl::model
