#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kwcl/nn/tape.hpp"

namespace kwcl::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected Adam. Moment tensors and step counts are kept per parameter
/// name, so a parameter advances only when it is actually stepped. step()
/// zeroes the gradients of the parameters it updated.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    const AdamConfig& config() const { return cfg_; }

    void step(const std::vector<Parameter*>& params);

    std::int64_t step_count(const std::string& name) const;

private:
    struct State {
        Tensor m;
        Tensor v;
        std::int64_t t = 0;
    };

    AdamConfig cfg_;
    std::map<std::string, State> state_;
};

} // namespace kwcl::nn
