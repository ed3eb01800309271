#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "netdelay/tensor.hpp"

// Reverse-mode automatic differentiation over a recorded operation graph.
// Each op appends a node holding its forward value and a closure that
// propagates the node's gradient to its inputs. A tape is built fresh per
// forward pass and discarded afterwards; it is not thread-safe.
//
// Index vectors passed to edge_matvec / segment_sum are captured by pointer
// and must outlive the tape.

namespace netdelay::nn {

using NodeId = std::int32_t;

class BatchTooSmall : public std::runtime_error {
 public:
  explicit BatchTooSmall(const std::string& what) : std::runtime_error(what) {}
};

class Tape {
 public:
  NodeId leaf(const Tensor& value, bool requires_grad);
  NodeId constant(Tensor value);

  const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  // Gradient accumulated for a node; zeros if backward never reached it.
  const Tensor& grad(NodeId id);

  // Runs reverse accumulation from a scalar node.
  void backward(NodeId root);

  // Accumulated estimate of forward fused multiply-add work, for cost
  // scaling assertions.
  double op_cost() const { return op_cost_; }

  // --- operations ---------------------------------------------------
  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId add_rowvec(NodeId a, NodeId bias);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId affine(NodeId a, double scale, double shift);
  NodeId selu(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId tanh(NodeId a);
  NodeId pad_cols(NodeId a, std::int64_t new_cols);
  NodeId concat_cols(NodeId a, NodeId b);

  // out[r, :] = reshape(a_flat[r], d x d) * h[index[r], :]
  NodeId edge_matvec(NodeId a_flat, NodeId h, const std::vector<std::int32_t>& index,
                     std::int64_t dim);
  // out[segment[r], :] += a[r, :]
  NodeId segment_sum(NodeId a, const std::vector<std::int32_t>& segment,
                     std::int64_t num_segments);

  // Batch normalization over rows. Training mode normalizes by batch
  // statistics (throws BatchTooSmall for fewer than 2 rows) and, when
  // update_running is set, folds them into the running estimates with the
  // given momentum. Inference mode is an affine map by the running stats.
  NodeId batch_norm(NodeId x, NodeId gamma, NodeId beta, Tensor* running_mean,
                    Tensor* running_var, bool training, double momentum = 0.99,
                    double eps = 1e-5, bool update_running = true);

  NodeId mse(NodeId pred, NodeId target);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool grad_live = false;
    std::function<void()> backprop;
  };

  NodeId push(Tensor value, bool requires_grad, std::function<void()> backprop = nullptr);
  Tensor& grad_ref(NodeId id);
  Tensor& val_ref(NodeId id) { return nodes_[static_cast<std::size_t>(id)].value; }

  std::vector<Node> nodes_;
  double op_cost_ = 0.0;
};

// Composite layers used across the model.

struct DenseRefs {
  NodeId weight;
  NodeId bias;
};

// x * W + b (rows are samples).
NodeId dense(Tape& tape, NodeId x, const DenseRefs& p);

// dense -> SELU -> dense.
struct MlpRefs {
  DenseRefs hidden;
  DenseRefs out;
};
NodeId mlp(Tape& tape, NodeId x, const MlpRefs& p);

struct GruRefs {
  NodeId wz, uz, bz;
  NodeId wr, ur, br;
  NodeId wh, uh, bh;
};

// One gated-recurrent-unit update:
//   z = sigmoid(m Wz + h Uz + bz)
//   r = sigmoid(m Wr + h Ur + br)
//   c = tanh(m Wh + (r . h) Uh + bh)
//   h' = (1 - z) . h + z . c
NodeId gru_step(Tape& tape, const GruRefs& p, NodeId h, NodeId m);

}  // namespace netdelay::nn
