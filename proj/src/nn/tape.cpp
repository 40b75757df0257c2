#include "kwcl/nn/tape.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <memory>

#include "kwcl/util/errors.hpp"

namespace kwcl::nn {

namespace {

void check_finite(const Tensor& t, const char* op) {
#ifndef NDEBUG
    if (!t.all_finite()) throw NumericError(std::string("non-finite value produced by ") + op);
#else
    (void)t;
    (void)op;
#endif
}

} // namespace

Tape::NodeId Tape::push(Tensor value, std::function<void(Tape&)> backward_fn, Parameter* param) {
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(backward_fn), param});
    return nodes_.size() - 1;
}

Tape::NodeId Tape::constant(Tensor value) { return push(std::move(value)); }

Tape::NodeId Tape::parameter(Parameter& p) { return push(p.value, nullptr, &p); }

Tape::NodeId Tape::embedding_lookup(NodeId table, const IndexMatrix& ids) {
    const Tensor& tab = value(table);
    if (tab.rank() != 2) throw NumericError("embedding_lookup: table must be [V x d]");
    const std::size_t vocab = tab.dim(0), d = tab.dim(1);
    const std::size_t B = ids.rows, L = ids.cols;
    for (std::int32_t id : ids.ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
            throw NumericError("embedding_lookup: token id " + std::to_string(id) +
                               " out of range [0, " + std::to_string(vocab) + ")");
        }
    }
    Tensor out({B, L, d});
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t l = 0; l < L; ++l) {
            std::int32_t id = ids.at(b, l);
            if (id == 0) continue; // PAD row is frozen at zero
            for (std::size_t e = 0; e < d; ++e) out.at(b, l, e) = tab.at(static_cast<std::size_t>(id), e);
        }
    }
    check_finite(out, "embedding_lookup");
    IndexMatrix saved = ids;
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, table, saved, B, L, d](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& tg = t.node(table).grad;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t l = 0; l < L; ++l) {
                std::int32_t id = saved.at(b, l);
                if (id == 0) continue;
                for (std::size_t e = 0; e < d; ++e) {
                    tg.at(static_cast<std::size_t>(id), e) += g.at(b, l, e);
                }
            }
        }
    };
    return self;
}

Tape::NodeId Tape::conv1d(NodeId input, NodeId kernels, NodeId bias) {
    const Tensor& in = value(input);
    const Tensor& ker = value(kernels);
    const Tensor& bi = value(bias);
    if (in.rank() != 3 || ker.rank() != 3 || bi.rank() != 1) {
        throw NumericError("conv1d: expected input [B x L x d], kernels [C x k x d], bias [C]");
    }
    const std::size_t B = in.dim(0), L = in.dim(1), d = in.dim(2);
    const std::size_t C = ker.dim(0), k = ker.dim(1);
    if (ker.dim(2) != d) throw NumericError("conv1d: kernel depth does not match input depth");
    if (bi.dim(0) != C) throw NumericError("conv1d: bias length does not match kernel count");
    if (L < k) throw NumericError("conv1d: sequence length " + std::to_string(L) +
                                  " shorter than kernel size " + std::to_string(k));
    const std::size_t T = L - k + 1;
    Tensor out({B, T, C});
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t c = 0; c < C; ++c) {
                double acc = bi[c];
                for (std::size_t j = 0; j < k; ++j) {
                    for (std::size_t e = 0; e < d; ++e) {
                        acc += in.at(b, t + j, e) * ker.at(c, j, e);
                    }
                }
                out.at(b, t, c) = acc;
            }
        }
    }
    check_finite(out, "conv1d");
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, input, kernels, bias, B, T, C, k, d](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& in = t.node(input).value;
        const Tensor& ker = t.node(kernels).value;
        Tensor& gi = t.node(input).grad;
        Tensor& gk = t.node(kernels).grad;
        Tensor& gb = t.node(bias).grad;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t ti = 0; ti < T; ++ti) {
                for (std::size_t c = 0; c < C; ++c) {
                    const double gv = g.at(b, ti, c);
                    if (gv == 0.0) continue;
                    gb[c] += gv;
                    for (std::size_t j = 0; j < k; ++j) {
                        for (std::size_t e = 0; e < d; ++e) {
                            gi.at(b, ti + j, e) += gv * ker.at(c, j, e);
                            gk.at(c, j, e) += gv * in.at(b, ti + j, e);
                        }
                    }
                }
            }
        }
    };
    return self;
}

Tape::NodeId Tape::global_max_pool(NodeId input) {
    const Tensor& in = value(input);
    if (in.rank() != 3) throw NumericError("global_max_pool: expected [B x T x C]");
    std::vector<std::int32_t> full(in.dim(0), static_cast<std::int32_t>(in.dim(1)));
    return global_max_pool(input, full);
}

Tape::NodeId Tape::global_max_pool(NodeId input, const std::vector<std::int32_t>& valid) {
    const Tensor& in = value(input);
    if (in.rank() != 3) throw NumericError("global_max_pool: expected [B x T x C]");
    const std::size_t B = in.dim(0), T = in.dim(1), C = in.dim(2);
    if (valid.size() != B) throw NumericError("global_max_pool: one valid length per row required");
    Tensor out({B, C});
    std::vector<std::size_t> argmax(B * C, 0);
    for (std::size_t b = 0; b < B; ++b) {
        std::size_t lim = static_cast<std::size_t>(std::clamp<std::int64_t>(valid[b], 1, static_cast<std::int64_t>(T)));
        for (std::size_t c = 0; c < C; ++c) {
            double best = in.at(b, 0, c);
            std::size_t best_t = 0;
            for (std::size_t t = 1; t < lim; ++t) {
                double v = in.at(b, t, c);
                if (v > best) { // strict: ties keep the first position
                    best = v;
                    best_t = t;
                }
            }
            out.at(b, c) = best;
            argmax[b * C + c] = best_t;
        }
    }
    check_finite(out, "global_max_pool");
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, input, argmax, B, C](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& gi = t.node(input).grad;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t c = 0; c < C; ++c) {
                gi.at(b, argmax[b * C + c], c) += g.at(b, c);
            }
        }
    };
    return self;
}

Tape::NodeId Tape::linear(NodeId input, NodeId weight, NodeId bias) {
    const Tensor& in = value(input);
    const Tensor& w = value(weight);
    const Tensor& bi = value(bias);
    if (in.rank() != 2 || w.rank() != 2 || bi.rank() != 1) {
        throw NumericError("linear: expected input [B x I], weight [I x O], bias [O]");
    }
    const std::size_t B = in.dim(0), I = in.dim(1), O = w.dim(1);
    if (w.dim(0) != I) throw NumericError("linear: weight rows do not match input width");
    if (bi.dim(0) != O) throw NumericError("linear: bias length does not match output width");
    Tensor out({B, O});
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t o = 0; o < O; ++o) {
            double acc = bi[o];
            for (std::size_t i = 0; i < I; ++i) acc += in.at(b, i) * w.at(i, o);
            out.at(b, o) = acc;
        }
    }
    check_finite(out, "linear");
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, input, weight, bias, B, I, O](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& in = t.node(input).value;
        const Tensor& w = t.node(weight).value;
        Tensor& gi = t.node(input).grad;
        Tensor& gw = t.node(weight).grad;
        Tensor& gb = t.node(bias).grad;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t o = 0; o < O; ++o) {
                const double gv = g.at(b, o);
                if (gv == 0.0) continue;
                gb[o] += gv;
                for (std::size_t i = 0; i < I; ++i) {
                    gi.at(b, i) += gv * w.at(i, o);
                    gw.at(i, o) += gv * in.at(b, i);
                }
            }
        }
    };
    return self;
}

Tape::NodeId Tape::relu(NodeId input) {
    const Tensor& in = value(input);
    Tensor out = in;
    for (std::size_t i = 0; i < out.numel(); ++i) {
        if (out[i] < 0.0) out[i] = 0.0;
    }
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, input](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& in = t.node(input).value;
        Tensor& gi = t.node(input).grad;
        for (std::size_t i = 0; i < gi.numel(); ++i) {
            if (in[i] > 0.0) gi[i] += g[i];
        }
    };
    return self;
}

Tape::NodeId Tape::concat(NodeId a, NodeId b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (ta.rank() != 2 || tb.rank() != 2 || ta.dim(0) != tb.dim(0)) {
        throw NumericError("concat: expected two [B x *] tensors with equal batch size");
    }
    const std::size_t B = ta.dim(0), Ia = ta.dim(1), Ib = tb.dim(1);
    Tensor out({B, Ia + Ib});
    for (std::size_t r = 0; r < B; ++r) {
        for (std::size_t i = 0; i < Ia; ++i) out.at(r, i) = ta.at(r, i);
        for (std::size_t i = 0; i < Ib; ++i) out.at(r, Ia + i) = tb.at(r, i);
    }
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, a, b, B, Ia, Ib](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t r = 0; r < B; ++r) {
            for (std::size_t i = 0; i < Ia; ++i) ga.at(r, i) += g.at(r, i);
            for (std::size_t i = 0; i < Ib; ++i) gb.at(r, i) += g.at(r, Ia + i);
        }
    };
    return self;
}

Tape::NodeId Tape::softmax(NodeId logits) {
    const Tensor& in = value(logits);
    if (in.rank() != 2) throw NumericError("softmax: expected [B x K]");
    const std::size_t B = in.dim(0), K = in.dim(1);
    Tensor out({B, K});
    for (std::size_t b = 0; b < B; ++b) {
        double mx = in.at(b, 0);
        for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, in.at(b, k));
        double z = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            double e = std::exp(in.at(b, k) - mx);
            out.at(b, k) = e;
            z += e;
        }
        for (std::size_t k = 0; k < K; ++k) out.at(b, k) /= z;
    }
    check_finite(out, "softmax");
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, logits, B, K](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& y = t.node(self).value;
        Tensor& gi = t.node(logits).grad;
        for (std::size_t b = 0; b < B; ++b) {
            double dot = 0.0;
            for (std::size_t k = 0; k < K; ++k) dot += g.at(b, k) * y.at(b, k);
            for (std::size_t k = 0; k < K; ++k) {
                gi.at(b, k) += y.at(b, k) * (g.at(b, k) - dot);
            }
        }
    };
    return self;
}

Tape::NodeId Tape::cross_entropy(NodeId logits, const std::vector<std::int32_t>& targets, Reduction reduction) {
    const Tensor& in = value(logits);
    if (in.rank() != 2) throw NumericError("cross_entropy: expected logits [B x K]");
    const std::size_t B = in.dim(0), K = in.dim(1);
    if (targets.size() != B) throw NumericError("cross_entropy: one target per row required");
    for (std::int32_t t : targets) {
        if (t < 0 || static_cast<std::size_t>(t) >= K) {
            throw NumericError("cross_entropy: target class " + std::to_string(t) + " out of range");
        }
    }
    // Softmax probabilities are saved for the backward pass.
    auto probs = std::make_shared<Tensor>(std::vector<std::size_t>{B, K});
    double total = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
        double mx = in.at(b, 0);
        for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, in.at(b, k));
        double z = 0.0;
        for (std::size_t k = 0; k < K; ++k) z += std::exp(in.at(b, k) - mx);
        double logz = std::log(z) + mx;
        for (std::size_t k = 0; k < K; ++k) probs->at(b, k) = std::exp(in.at(b, k) - logz);
        total += logz - in.at(b, static_cast<std::size_t>(targets[b]));
    }
    const double scale = reduction == Reduction::Mean ? 1.0 / static_cast<double>(B) : 1.0;
    Tensor out = Tensor::scalar(total * scale);
    check_finite(out, "cross_entropy");
    std::vector<std::int32_t> saved = targets;
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, logits, probs, saved, B, K, scale](Tape& t) {
        const double g = t.node(self).grad.item() * scale;
        Tensor& gi = t.node(logits).grad;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                double delta = (static_cast<std::size_t>(saved[b]) == k) ? 1.0 : 0.0;
                gi.at(b, k) += g * (probs->at(b, k) - delta);
            }
        }
    };
    return self;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb)) throw NumericError("add: shape mismatch");
    Tensor out = ta;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] += tb[i];
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, a, b](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    };
    return self;
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb)) throw NumericError("mul: shape mismatch");
    Tensor out = ta;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= tb[i];
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, a, b](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& ta = t.node(a).value;
        const Tensor& tb = t.node(b).value;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i] * tb[i];
            gb[i] += g[i] * ta[i];
        }
    };
    return self;
}

Tape::NodeId Tape::scale(NodeId a, double factor) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= factor;
    NodeId self = push(std::move(out), nullptr);
    node(self).backward_fn = [self, a, factor](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += factor * g[i];
    };
    return self;
}

Tape::NodeId Tape::sum(NodeId a) {
    const Tensor& ta = value(a);
    double acc = 0.0;
    for (std::size_t i = 0; i < ta.numel(); ++i) acc += ta[i];
    NodeId self = push(Tensor::scalar(acc), nullptr);
    node(self).backward_fn = [self, a](Tape& t) {
        const double g = t.node(self).grad.item();
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < ga.numel(); ++i) ga[i] += g;
    };
    return self;
}

void Tape::backward(NodeId loss) {
    if (loss >= nodes_.size()) throw NumericError("backward: unknown node");
    if (nodes_[loss].value.numel() != 1) throw NumericError("backward: loss must be scalar");
    for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape());
    nodes_[loss].grad.fill(1.0);
    for (std::size_t i = loss + 1; i-- > 0;) {
        if (nodes_[i].backward_fn) nodes_[i].backward_fn(*this);
    }
    for (Node& n : nodes_) {
        if (!n.param) continue;
        assert(n.param->grad.same_shape(n.grad));
        for (std::size_t i = 0; i < n.grad.numel(); ++i) n.param->grad[i] += n.grad[i];
    }
}

} // namespace kwcl::nn
