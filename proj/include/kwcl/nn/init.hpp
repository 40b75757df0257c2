#pragma once

#include <random>

#include "kwcl/nn/tensor.hpp"

namespace kwcl::nn {

/// uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Tensor xavier_uniform(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                      std::mt19937_64& rng);

Tensor normal_init(std::vector<std::size_t> shape, double mean, double stddev, std::mt19937_64& rng);

} // namespace kwcl::nn
