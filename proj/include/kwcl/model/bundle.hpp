#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kwcl/model/config.hpp"
#include "kwcl/nn/tape.hpp"

namespace kwcl::model {

/// All parameters of the shared-private model, keyed by stable names:
///   embedding.table
///   shared.conv<k>.{kernel,bias}
///   private.<domain>.conv<k>.{kernel,bias}
///   discriminator.fc{1,2}.{weight,bias}
///   classifier.fc{1,2}.{weight,bias}
/// The map's lexicographic order is the checkpoint and iteration order.
class ModelBundle {
public:
    ModelBundle(ModelConfig cfg, std::vector<std::string> domains, std::size_t vocab_size,
                std::size_t num_labels);

    const ModelConfig& config() const { return cfg_; }
    const std::vector<std::string>& domains() const { return domains_; }
    std::size_t num_domains() const { return domains_.size(); }
    std::size_t num_labels() const { return num_labels_; }
    std::size_t vocab_size() const { return vocab_size_; }

    nn::Parameter& param(const std::string& name);
    const nn::Parameter& param(const std::string& name) const;
    std::map<std::string, nn::Parameter>& params() { return params_; }
    const std::map<std::string, nn::Parameter>& params() const { return params_; }

    /// Embedding plus the shared conv bank: the trainable surface of F_s.
    std::vector<nn::Parameter*> shared_params();
    std::vector<nn::Parameter*> private_params(std::size_t domain_index);
    std::vector<nn::Parameter*> discriminator_params();
    std::vector<nn::Parameter*> classifier_params();
    std::vector<nn::Parameter*> all_params();

    void zero_all_grads();

    /// Deep copy / restore of parameter values (not gradients), for
    /// best-checkpoint tracking and read-only evaluation snapshots.
    std::map<std::string, nn::Tensor> snapshot_values() const;
    void restore_values(const std::map<std::string, nn::Tensor>& values);

private:
    ModelConfig cfg_;
    std::vector<std::string> domains_;
    std::size_t vocab_size_ = 0;
    std::size_t num_labels_ = 0;
    std::map<std::string, nn::Parameter> params_;

    std::vector<nn::Parameter*> collect(const std::string& prefix);
};

/// Allocates and initializes a bundle: uniform Glorot bounds for conv and
/// linear weights, zero biases, N(0, 0.1) embeddings with the PAD row zeroed.
/// Every parameter draws from its own named sub-generator of `seed`, so
/// initialization is independent of construction order.
ModelBundle build_model(const ModelConfig& cfg, const std::vector<std::string>& domains,
                        std::size_t vocab_size, std::size_t num_labels, std::uint64_t seed);

} // namespace kwcl::model
