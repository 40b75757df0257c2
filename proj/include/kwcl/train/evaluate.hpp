#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwcl/corpus/batch.hpp"
#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/model/bundle.hpp"

namespace kwcl::train {

struct EvalResult {
    std::vector<std::string> domains;
    std::vector<double> accuracy; // aligned with domains
    double average = 0.0;         // unweighted mean over domains
};

/// Argmax accuracy on each domain's test set, every sample routed through
/// its own domain extractor; ties pick the lowest class index. Errors on an
/// empty test set.
EvalResult evaluate(model::ModelBundle& bundle, const corpus::Vocabulary& vocab,
                    const corpus::MultiDomainDataset& dataset, const corpus::BatchConfig& cfg);

struct ProbeConfig {
    std::size_t steps = 150;
    double lr = 1e-2;
    std::size_t hidden = 100;
    corpus::BatchConfig batches;
};

/// Trains a fresh two-layer probe to predict the source domain from frozen
/// shared features of the training documents, then reports its accuracy on
/// the test documents. Accuracy near 1/M means the shared features carry no
/// domain identity.
double domain_invariance_probe(model::ModelBundle& bundle, const corpus::Vocabulary& vocab,
                               const corpus::MultiDomainDataset& dataset, const ProbeConfig& cfg,
                               std::uint64_t seed);

} // namespace kwcl::train
