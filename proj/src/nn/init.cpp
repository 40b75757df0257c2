#include "kwcl/nn/init.hpp"

#include <cmath>

#include "kwcl/util/rng.hpp"

namespace kwcl::nn {

Tensor xavier_uniform(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                      std::mt19937_64& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = util::uniform(rng, -a, a);
    return t;
}

Tensor normal_init(std::vector<std::size_t> shape, double mean, double stddev, std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = util::normal(rng, mean, stddev);
    return t;
}

} // namespace kwcl::nn
