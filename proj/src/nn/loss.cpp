#include "modecast/nn/loss.hpp"

#include "modecast/errors.hpp"
#include "modecast/kernels/kernels.hpp"

namespace modecast::nn {

double mse_loss(std::span<const double> predictions,
                std::span<const double> targets) {
  if (predictions.empty()) fail(ErrorKind::empty_batch, "mse: empty batch");
  if (predictions.size() != targets.size()) {
    fail(ErrorKind::shape, "mse: prediction/target length mismatch");
  }
  const double sum = kernels::active().sum_sq_diff(
      predictions.data(), targets.data(), predictions.size());
  return sum / static_cast<double>(predictions.size());
}

}  // namespace modecast::nn
