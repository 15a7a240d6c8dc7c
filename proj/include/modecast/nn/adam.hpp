#pragma once

#include <cstddef>
#include <vector>

#include "modecast/nn/tensor.hpp"

namespace modecast::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments. Moment buffers are owned here, one pair
/// per parameter tensor, in the order the tensors were registered.
class Adam {
 public:
  explicit Adam(std::vector<Tensor*> params, AdamConfig config = {});

  /// One update from the current grad buffers. Throws training_diverged if
  /// any gradient is non-finite.
  void step(double lr);

  std::size_t step_count() const { return t_; }

 private:
  std::vector<Tensor*> params_;
  AdamConfig config_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace modecast::nn
