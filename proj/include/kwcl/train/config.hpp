#pragma once

#include <cstdint>
#include <string>

#include "kwcl/corpus/batch.hpp"
#include "kwcl/model/config.hpp"
#include "kwcl/nn/adam.hpp"

namespace kwcl::train {

/// Everything a training run needs beyond the dataset and the schedule.
/// One master seed feeds every named sub-generator (init, split, shuffle,
/// probe); two runs with equal configs are bit-identical.
struct TrainConfig {
    std::uint64_t seed = 7;
    std::size_t epochs = 1;
    std::size_t max_steps = 0; // 0 = governed by epochs
    std::size_t batch_size = 16;
    std::size_t disc_steps = 1; // discriminator updates per domain visit
    std::size_t eval_every = 0; // in steps; 0 = at each epoch end
    bool exact_sum = false;     // per-sample sums instead of batch means
    nn::AdamConfig optimizer;
    model::ModelConfig arch; // carries lambda and max_len

    // Vocabulary knobs.
    std::size_t vocab_min_freq = 1;
    std::size_t vocab_max_size = 50000;

    /// Throws ConfigError on out-of-range values; also validates arch.
    void validate() const;

    corpus::BatchConfig batch_config() const {
        corpus::BatchConfig cfg;
        cfg.batch_size = batch_size;
        cfg.max_len = arch.max_len;
        return cfg;
    }
};

} // namespace kwcl::train
