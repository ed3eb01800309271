#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "netdelay/rng.hpp"
#include "netdelay/tape.hpp"
#include "netdelay/tensor.hpp"

namespace netdelay::nn {

struct Param {
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
  bool trainable = true;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Named parameter tensors with their gradient accumulators and Adam state.
// Iteration order is insertion order, which keeps checkpoints and updates
// deterministic. A store is exclusively owned by one training loop.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor init, bool trainable = true);
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  const std::vector<std::string>& names() const { return order_; }

  void zero_grads();
  std::int64_t trainable_coords() const;

  // Standard Adam update with bias correction; gradients are zeroed after
  // the step. Parameters with zero accumulated gradient and zero moments
  // stay put.
  void adam_step(const AdamConfig& cfg);
  std::int64_t adam_steps() const { return adam_steps_; }
  void set_adam_steps(std::int64_t t) { adam_steps_ = t; }

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Param> params_;
  std::int64_t adam_steps_ = 0;
};

// Zero-mean normal with variance 1/fan_in, the self-normalizing regime for
// SELU stacks; used for every dense and recurrent weight matrix.
Tensor normal_fan_in(std::vector<std::int64_t> shape, std::int64_t fan_in, Rng& rng);

// Elementwise SELU applied outside any tape, for direct use.
Tensor selu(const Tensor& x);

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::int64_t worst_coord = -1;
  std::int64_t coords_checked = 0;
  bool passed = false;
};

// Central-difference verification of a loss function's analytic gradients.
// loss_fn(store, accumulate) must return the loss and, when accumulate is
// set, add d loss / d param into the store's gradient buffers. Checks every
// trainable coordinate, or a per-parameter stratified subsample when
// max_coords > 0 (clamped to at least 200). Coordinates where both the
// analytic and numeric gradient are below 1e-7 count as matching.
GradCheckReport gradient_check(const std::function<double(ParamStore&, bool)>& loss_fn,
                               ParamStore& store, double eps = 1e-5, double tol = 1e-4,
                               std::int64_t max_coords = 0, std::uint64_t subsample_seed = 0);

}  // namespace netdelay::nn
