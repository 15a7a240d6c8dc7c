#pragma once

#include <span>

namespace modecast::nn {

/// Mean squared error over equal-length prediction/target arrays.
double mse_loss(std::span<const double> predictions,
                std::span<const double> targets);

}  // namespace modecast::nn
