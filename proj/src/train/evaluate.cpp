#include "kwcl/train/evaluate.hpp"

#include <algorithm>
#include <numeric>

#include "kwcl/model/forward.hpp"
#include "kwcl/nn/adam.hpp"
#include "kwcl/nn/init.hpp"
#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::train {

namespace {

std::size_t argmax_row(const nn::Tensor& logits, std::size_t row) {
    std::size_t cols = logits.shape()[1];
    std::size_t best = 0;
    for (std::size_t c = 1; c < cols; ++c) {
        if (logits.at(row, c) > logits.at(row, best)) best = c;
    }
    return best;
}

/// Sequential fixed-order batches over a document list.
std::vector<corpus::TokenizedBatch> sequential_batches(const std::vector<corpus::Document>& docs,
                                                       const corpus::Vocabulary& vocab,
                                                       const corpus::BatchConfig& cfg,
                                                       int domain_index) {
    corpus::BatchStream stream(&docs, &vocab, cfg, 0, domain_index);
    std::vector<corpus::TokenizedBatch> out;
    for (std::size_t start = 0; start < docs.size(); start += cfg.batch_size) {
        std::size_t end = std::min(docs.size(), start + cfg.batch_size);
        std::vector<std::size_t> positions(end - start);
        std::iota(positions.begin(), positions.end(), start);
        out.push_back(stream.make_batch(positions));
    }
    return out;
}

} // namespace

EvalResult evaluate(model::ModelBundle& bundle, const corpus::Vocabulary& vocab,
                    const corpus::MultiDomainDataset& dataset, const corpus::BatchConfig& cfg) {
    EvalResult result;
    result.domains = dataset.domains();
    double acc_sum = 0.0;
    for (std::size_t i = 0; i < result.domains.size(); ++i) {
        const std::vector<corpus::Document>& test = dataset.domain_data(i).test;
        if (test.empty()) {
            throw DataError("evaluate: domain '" + result.domains[i] +
                                  "' has no test documents");
        }
        std::size_t correct = 0;
        for (const corpus::TokenizedBatch& batch :
             sequential_batches(test, vocab, cfg, static_cast<int>(i))) {
            nn::Tensor logits = model::classify(bundle, i, batch);
            for (std::size_t r = 0; r < batch.rows; ++r) {
                if (static_cast<std::int32_t>(argmax_row(logits, r)) == (*batch.labels)[r]) {
                    ++correct;
                }
            }
        }
        double acc = static_cast<double>(correct) / static_cast<double>(test.size());
        result.accuracy.push_back(acc);
        acc_sum += acc;
    }
    result.average = acc_sum / static_cast<double>(result.domains.size());
    return result;
}

namespace {

struct FeatureSet {
    nn::Tensor features; // [n x shared_dim]
    std::vector<std::int32_t> domains;
};

FeatureSet collect_shared_features(model::ModelBundle& bundle, const corpus::Vocabulary& vocab,
                                   const corpus::MultiDomainDataset& dataset,
                                   const corpus::BatchConfig& cfg, bool use_train) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < dataset.domains().size(); ++i) {
        const corpus::DomainData& dd = dataset.domain_data(i);
        total += use_train ? dd.train.size() : dd.test.size();
    }
    FeatureSet out;
    std::size_t dim = bundle.config().shared_dim();
    out.features = nn::Tensor::zeros({total, dim});
    out.domains.reserve(total);
    std::size_t row = 0;
    for (std::size_t i = 0; i < dataset.domains().size(); ++i) {
        const corpus::DomainData& dd = dataset.domain_data(i);
        const std::vector<corpus::Document>& docs = use_train ? dd.train : dd.test;
        for (const corpus::TokenizedBatch& batch :
             sequential_batches(docs, vocab, cfg, static_cast<int>(i))) {
            nn::Tensor feats = model::shared_forward(bundle, batch);
            for (std::size_t r = 0; r < batch.rows; ++r) {
                for (std::size_t c = 0; c < dim; ++c) out.features.at(row, c) = feats.at(r, c);
                out.domains.push_back(static_cast<std::int32_t>(i));
                ++row;
            }
        }
    }
    return out;
}

} // namespace

double domain_invariance_probe(model::ModelBundle& bundle, const corpus::Vocabulary& vocab,
                               const corpus::MultiDomainDataset& dataset, const ProbeConfig& cfg,
                               std::uint64_t seed) {
    for (std::size_t i = 0; i < dataset.domains().size(); ++i) {
        const corpus::DomainData& dd = dataset.domain_data(i);
        if (dd.train.empty() || dd.test.empty()) {
            throw DataError("probe: domain '" + dataset.domains()[i] +
                            "' needs train and test documents");
        }
    }
    FeatureSet train = collect_shared_features(bundle, vocab, dataset, cfg.batches, true);
    FeatureSet test = collect_shared_features(bundle, vocab, dataset, cfg.batches, false);

    const std::size_t dim = bundle.config().shared_dim();
    const std::size_t m = dataset.domains().size();
    auto rng1 = util::make_rng(util::subseed(seed, "probe", "fc1.weight"));
    auto rng2 = util::make_rng(util::subseed(seed, "probe", "fc2.weight"));
    nn::Parameter w1("probe.fc1.weight", nn::xavier_uniform({dim, cfg.hidden}, dim, cfg.hidden, rng1));
    nn::Parameter b1("probe.fc1.bias", nn::Tensor::zeros({cfg.hidden}));
    nn::Parameter w2("probe.fc2.weight", nn::xavier_uniform({cfg.hidden, m}, cfg.hidden, m, rng2));
    nn::Parameter b2("probe.fc2.bias", nn::Tensor::zeros({m}));

    nn::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    nn::Adam adam(adam_cfg);
    std::vector<nn::Parameter*> params = {&w1, &b1, &w2, &b2};

    for (std::size_t s = 0; s < cfg.steps; ++s) {
        nn::Tape tape;
        nn::Tape::NodeId x = tape.constant(train.features);
        nn::Tape::NodeId h = tape.relu(tape.linear(x, tape.parameter(w1), tape.parameter(b1)));
        nn::Tape::NodeId logits = tape.linear(h, tape.parameter(w2), tape.parameter(b2));
        nn::Tape::NodeId loss = tape.cross_entropy(logits, train.domains, nn::Reduction::Mean);
        tape.backward(loss);
        adam.step(params);
    }

    nn::Tape tape;
    nn::Tape::NodeId x = tape.constant(test.features);
    nn::Tape::NodeId h = tape.relu(tape.linear(x, tape.parameter(w1), tape.parameter(b1)));
    nn::Tape::NodeId logits_id = tape.linear(h, tape.parameter(w2), tape.parameter(b2));
    const nn::Tensor& logits = tape.value(logits_id);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test.domains.size(); ++r) {
        if (static_cast<std::int32_t>(argmax_row(logits, r)) == test.domains[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.domains.size());
}

} // namespace kwcl::train
