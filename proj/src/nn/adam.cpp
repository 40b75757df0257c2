#include "kwcl/nn/adam.hpp"

#include <cmath>

namespace kwcl::nn {

void Adam::step(const std::vector<Parameter*>& params) {
    for (Parameter* p : params) {
        State& s = state_[p->name];
        if (s.t == 0) {
            s.m = Tensor::zeros(p->value.shape());
            s.v = Tensor::zeros(p->value.shape());
        }
        s.t += 1;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(s.t));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(s.t));
        for (std::size_t i = 0; i < p->value.numel(); ++i) {
            const double g = p->grad[i];
            s.m[i] = cfg_.beta1 * s.m[i] + (1.0 - cfg_.beta1) * g;
            s.v[i] = cfg_.beta2 * s.v[i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = s.m[i] / bc1;
            const double vhat = s.v[i] / bc2;
            p->value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
        p->zero_grad();
    }
}

std::int64_t Adam::step_count(const std::string& name) const {
    auto it = state_.find(name);
    return it == state_.end() ? 0 : it->second.t;
}

} // namespace kwcl::nn
