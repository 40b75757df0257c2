#include "kwcl/model/bundle.hpp"

#include <algorithm>

#include "kwcl/nn/init.hpp"
#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::model {

std::size_t ModelConfig::largest_kernel() const {
    std::size_t k = 0;
    for (std::size_t s : kernel_sizes) k = std::max(k, s);
    return k;
}

void ModelConfig::validate() const {
    if (kernel_sizes.empty()) throw ConfigError("model: kernel_sizes must be non-empty");
    for (std::size_t k : kernel_sizes) {
        if (k == 0) throw ConfigError("model: kernel size 0 is invalid");
    }
    if (channels == 0) throw ConfigError("model: channels must be positive");
    if (embed_dim == 0) throw ConfigError("model: embed_dim must be positive");
    if (hidden == 0) throw ConfigError("model: hidden width must be positive");
    if (lambda <= 0.0) throw ConfigError("model: lambda must be > 0");
    if (max_len < largest_kernel()) {
        throw ConfigError("model: max_len " + std::to_string(max_len) +
                                " is smaller than the largest kernel " +
                                std::to_string(largest_kernel()));
    }
}

ModelBundle::ModelBundle(ModelConfig cfg, std::vector<std::string> domains, std::size_t vocab_size,
                         std::size_t num_labels)
    : cfg_(std::move(cfg)), domains_(std::move(domains)), vocab_size_(vocab_size),
      num_labels_(num_labels) {
    cfg_.validate();
    if (domains_.empty()) throw ConfigError("model: domain list is empty");
    if (vocab_size_ < 2) throw ConfigError("model: vocabulary must hold PAD and UNK");
    if (num_labels_ < 2) throw ConfigError("model: need at least 2 labels");

    auto add = [&](const std::string& name, std::vector<std::size_t> shape) {
        params_.emplace(name, nn::Parameter(name, nn::Tensor::zeros(std::move(shape))));
    };

    add("embedding.table", {vocab_size_, cfg_.embed_dim});
    auto add_bank = [&](const std::string& prefix) {
        for (std::size_t k : cfg_.kernel_sizes) {
            add(prefix + ".conv" + std::to_string(k) + ".kernel", {cfg_.channels, k, cfg_.embed_dim});
            add(prefix + ".conv" + std::to_string(k) + ".bias", {cfg_.channels});
        }
    };
    add_bank("shared");
    for (const std::string& d : domains_) add_bank("private." + d);

    std::size_t concat_dim = cfg_.shared_dim() + cfg_.private_dim();
    add("discriminator.fc1.weight", {cfg_.shared_dim(), cfg_.hidden});
    add("discriminator.fc1.bias", {cfg_.hidden});
    add("discriminator.fc2.weight", {cfg_.hidden, domains_.size()});
    add("discriminator.fc2.bias", {domains_.size()});
    add("classifier.fc1.weight", {concat_dim, cfg_.hidden});
    add("classifier.fc1.bias", {cfg_.hidden});
    add("classifier.fc2.weight", {cfg_.hidden, num_labels_});
    add("classifier.fc2.bias", {num_labels_});
}

nn::Parameter& ModelBundle::param(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("model: no parameter named '" + name + "'");
    return it->second;
}

const nn::Parameter& ModelBundle::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("model: no parameter named '" + name + "'");
    return it->second;
}

std::vector<nn::Parameter*> ModelBundle::collect(const std::string& prefix) {
    std::vector<nn::Parameter*> out;
    for (auto& [name, p] : params_) {
        if (name.rfind(prefix, 0) == 0) out.push_back(&p);
    }
    return out;
}

std::vector<nn::Parameter*> ModelBundle::shared_params() {
    std::vector<nn::Parameter*> out = collect("shared.");
    out.push_back(&param("embedding.table"));
    return out;
}

std::vector<nn::Parameter*> ModelBundle::private_params(std::size_t domain_index) {
    if (domain_index >= domains_.size()) {
        throw ConfigError("model: domain index " + std::to_string(domain_index) +
                                " out of range");
    }
    return collect("private." + domains_[domain_index] + ".");
}

std::vector<nn::Parameter*> ModelBundle::discriminator_params() {
    return collect("discriminator.");
}

std::vector<nn::Parameter*> ModelBundle::classifier_params() {
    return collect("classifier.");
}

std::vector<nn::Parameter*> ModelBundle::all_params() {
    std::vector<nn::Parameter*> out;
    out.reserve(params_.size());
    for (auto& [name, p] : params_) out.push_back(&p);
    return out;
}

void ModelBundle::zero_all_grads() {
    for (auto& [name, p] : params_) p.zero_grad();
}

std::map<std::string, nn::Tensor> ModelBundle::snapshot_values() const {
    std::map<std::string, nn::Tensor> out;
    for (const auto& [name, p] : params_) out.emplace(name, p.value);
    return out;
}

void ModelBundle::restore_values(const std::map<std::string, nn::Tensor>& values) {
    for (auto& [name, tensor] : values) {
        nn::Parameter& p = param(name);
        if (!p.value.same_shape(tensor)) {
            throw ConfigError("model: snapshot shape mismatch for '" + name + "'");
        }
        p.value = tensor;
    }
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

ModelBundle build_model(const ModelConfig& cfg, const std::vector<std::string>& domains,
                        std::size_t vocab_size, std::size_t num_labels, std::uint64_t seed) {
    ModelBundle bundle(cfg, domains, vocab_size, num_labels);
    for (auto& [name, p] : bundle.params()) {
        auto rng = util::make_rng(util::subseed(seed, "init", name));
        if (name == "embedding.table") {
            p.value = nn::normal_init(p.value.shape(), 0.0, 0.1, rng);
            for (std::size_t j = 0; j < cfg.embed_dim; ++j) p.value.at(0, j) = 0.0; // PAD row
        } else if (ends_with(name, ".bias")) {
            p.value.fill(0.0);
        } else if (name.find(".conv") != std::string::npos) {
            // kernel [C x k x d]: fan_in = k*d, fan_out = k*C.
            std::size_t c = p.value.shape()[0], k = p.value.shape()[1];
            p.value = nn::xavier_uniform(p.value.shape(), k * p.value.shape()[2], k * c, rng);
        } else {
            // linear weight [I x O]
            p.value = nn::xavier_uniform(p.value.shape(), p.value.shape()[0], p.value.shape()[1], rng);
        }
    }
    return bundle;
}

} // namespace kwcl::model
