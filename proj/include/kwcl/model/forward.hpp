#pragma once

#include "kwcl/corpus/batch.hpp"
#include "kwcl/model/bundle.hpp"
#include "kwcl/nn/tape.hpp"

namespace kwcl::model {

/// Tape-building forwards. Each returns the id of the output node; callers
/// compose losses on the same tape and call backward once.

/// Token ids of `batch` as a tape-ready index matrix, right-padded with PAD
/// so every row is at least as long as the largest kernel.
nn::IndexMatrix padded_ids(const ModelBundle& bundle, const corpus::TokenizedBatch& batch);

/// Embedding -> per-kernel-size conv -> relu -> length-masked global max pool
/// -> concat. Features depend only on each row's real tokens, never on batch
/// padding. `prefix` selects the bank: "shared" or "private.<domain>".
nn::Tape::NodeId bank_features(nn::Tape& tape, ModelBundle& bundle, const std::string& prefix,
                               const corpus::TokenizedBatch& batch);

nn::Tape::NodeId shared_features(nn::Tape& tape, ModelBundle& bundle,
                                 const corpus::TokenizedBatch& batch);

nn::Tape::NodeId private_features(nn::Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                                  const corpus::TokenizedBatch& batch);

/// TextClassifier(concat(F_s(x), F_si(x))): shared features first, then the
/// batch's own domain extractor. Returns label logits [B x num_labels].
nn::Tape::NodeId classify_logits(nn::Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                                 const corpus::TokenizedBatch& batch);

/// Classifier head over already-built feature nodes; losses reuse one shared
/// forward for both heads through this.
nn::Tape::NodeId classify_logits_from(nn::Tape& tape, ModelBundle& bundle,
                                      nn::Tape::NodeId shared, nn::Tape::NodeId priv);

/// DomainDiscriminator over shared-feature node `features` [B x shared_dim].
/// Private extractors never feed this path.
nn::Tape::NodeId discriminate_logits(nn::Tape& tape, ModelBundle& bundle,
                                     nn::Tape::NodeId features);

/// Value-only conveniences on a throwaway tape.
nn::Tensor shared_forward(ModelBundle& bundle, const corpus::TokenizedBatch& batch);
nn::Tensor classify(ModelBundle& bundle, std::size_t domain_index,
                    const corpus::TokenizedBatch& batch);
nn::Tensor discriminate(ModelBundle& bundle, const corpus::TokenizedBatch& batch);

} // namespace kwcl::model
