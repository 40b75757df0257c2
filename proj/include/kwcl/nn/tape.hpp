#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kwcl/nn/tensor.hpp"

namespace kwcl::nn {

/// Trainable tensor with its gradient accumulator. Names are stable and are
/// the keys of optimizer state and checkpoints.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, Tensor v)
        : name(std::move(n)), value(std::move(v)), grad(Tensor::zeros(value.shape())) {}

    void zero_grad() { grad.fill(0.0); }
};

/// Batch of token-index rows, PAD-filled to a rectangle.
struct IndexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int32_t> ids; // row-major

    std::int32_t at(std::size_t r, std::size_t c) const { return ids[r * cols + c]; }
};

enum class Reduction { Mean, Sum };

/// Records forward operations and replays them in reverse for gradients.
/// Nodes are created in topological order by construction; backward() visits
/// them exactly once in reverse creation order. All reductions accumulate in
/// row-major index order, so forward and backward passes are bit-deterministic
/// for fixed inputs.
class Tape {
public:
    using NodeId = std::size_t;

    /// Leaf holding a constant value; receives no parameter gradient.
    NodeId constant(Tensor value);

    /// Leaf bound to a Parameter; backward() adds dLoss/dvalue into p.grad.
    NodeId parameter(Parameter& p);

    /// Row gather [V x d] by ids [B x L] -> [B x L x d]. PAD (id 0) always
    /// yields a zero row and never receives gradient, whatever the table holds.
    NodeId embedding_lookup(NodeId table, const IndexMatrix& ids);

    /// Valid cross-correlation over the sequence axis.
    /// input [B x L x d], kernels [C x k x d], bias [C] -> [B x (L-k+1) x C].
    NodeId conv1d(NodeId input, NodeId kernels, NodeId bias);

    /// Per-channel max over the time axis: [B x T x C] -> [B x C].
    /// Gradient routes to the first maximal position.
    NodeId global_max_pool(NodeId input);

    /// Masked variant: row b pools over positions [0, valid[b]) with valid[b]
    /// clamped to [1, T]. Makes features independent of batch padding.
    NodeId global_max_pool(NodeId input, const std::vector<std::int32_t>& valid);

    /// input [B x I] * weight [I x O] + bias [O] -> [B x O].
    NodeId linear(NodeId input, NodeId weight, NodeId bias);

    NodeId relu(NodeId input);

    /// Concatenation along the last axis of two 2-D tensors.
    NodeId concat(NodeId a, NodeId b);

    /// Row-wise softmax with max subtraction, last axis of a 2-D tensor.
    NodeId softmax(NodeId logits);

    /// -log softmax(logits)[b, target[b]] reduced over the batch.
    NodeId cross_entropy(NodeId logits, const std::vector<std::int32_t>& targets, Reduction reduction);

    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b); // elementwise, same shape
    NodeId scale(NodeId a, double factor);
    NodeId sum(NodeId a); // all elements -> scalar

    const Tensor& value(NodeId id) const { return nodes_[id].value; }
    const Tensor& grad(NodeId id) const { return nodes_[id].grad; }

    /// Accumulates dLoss/dtheta into every Parameter bound on this tape.
    /// Parameters not on the tape are untouched. `loss` must be scalar.
    void backward(NodeId loss);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> backward_fn; // null for leaves
        Parameter* param = nullptr;
    };

    NodeId push(Tensor value, std::function<void(Tape&)> backward_fn = nullptr, Parameter* param = nullptr);
    Node& node(NodeId id) { return nodes_[id]; }

    std::vector<Node> nodes_;
};

} // namespace kwcl::nn
