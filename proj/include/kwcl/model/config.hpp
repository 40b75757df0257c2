#pragma once

#include <cstddef>
#include <vector>

namespace kwcl::model {

/// Architecture knobs for the shared-private model. Defaults are desk-scale;
/// channel count is configurable up to the full-size setting.
struct ModelConfig {
    std::vector<std::size_t> kernel_sizes = {3, 4, 5};
    std::size_t channels = 50;   // per kernel size
    std::size_t embed_dim = 32;
    std::size_t hidden = 100;    // MLP hidden width, discriminator and classifier
    std::size_t max_len = 256;   // document truncation cap
    double lambda = 0.05;        // adversarial weight, must stay > 0

    std::size_t shared_dim() const { return kernel_sizes.size() * channels; }
    std::size_t private_dim() const { return shared_dim(); }
    std::size_t largest_kernel() const;

    /// Throws ConfigError on empty kernel list, zero sizes, lambda <= 0, or
    /// max_len smaller than the largest kernel.
    void validate() const;
};

} // namespace kwcl::model
