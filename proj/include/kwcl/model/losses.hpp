#pragma once

#include <vector>

#include "kwcl/corpus/batch.hpp"
#include "kwcl/model/bundle.hpp"
#include "kwcl/nn/tape.hpp"

namespace kwcl::model {

/// One domain-index target per batch row.
std::vector<std::int32_t> domain_targets(const corpus::TokenizedBatch& batch);

/// Discriminator objective: cross-entropy of predicted domain against each
/// batch's true domain, summed across batches. With a single domain the
/// objective is the constant 0 and the discriminator is bypassed.
/// `detach_shared` feeds shared features as constants so gradients stop at
/// the discriminator (its own update phase).
nn::Tape::NodeId loss_dd(nn::Tape& tape, ModelBundle& bundle,
                         const std::vector<const corpus::TokenizedBatch*>& batches,
                         nn::Reduction reduction, bool detach_shared);

/// Classification objective over labeled batches, each routed through its
/// own domain extractor, summed across batches. Unlabeled batches are an
/// error here.
nn::Tape::NodeId loss_tc(nn::Tape& tape, ModelBundle& bundle,
                         const std::vector<const corpus::TokenizedBatch*>& batches,
                         nn::Reduction reduction);

/// The domain-i slice of the classification objective.
nn::Tape::NodeId loss_fsi(nn::Tape& tape, ModelBundle& bundle, std::size_t domain_index,
                          const corpus::TokenizedBatch& batch, nn::Reduction reduction);

struct SharedLoss {
    nn::Tape::NodeId classification = 0; // label cross-entropy over the batches
    nn::Tape::NodeId discrimination = 0; // domain cross-entropy on the same shared forwards
    nn::Tape::NodeId combined = 0;       // classification - lambda * discrimination
    bool has_discrimination = false;     // false when the bundle has one domain
};

/// Shared-extractor objective: classification minus lambda times the
/// discriminator objective, both heads reading one shared forward pass per
/// batch. lambda must be > 0.
SharedLoss shared_extractor_loss(nn::Tape& tape, ModelBundle& bundle,
                                 const std::vector<const corpus::TokenizedBatch*>& batches,
                                 nn::Reduction reduction, double lambda);

} // namespace kwcl::model
