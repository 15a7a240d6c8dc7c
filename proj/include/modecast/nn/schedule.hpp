#pragma once

#include <cstddef>

namespace modecast::nn {

/// Cosine annealing with warm restarts. With the default multiplier the
/// rate is periodic: lr_at(e) == lr_at(e + period).
struct CosineRestartSchedule {
  double eta_max = 1e-3;
  double eta_min = 0.0;
  std::size_t period = 200;           // epochs per cycle
  std::size_t period_multiplier = 1;  // cycle growth factor
};

double lr_at(std::size_t epoch, const CosineRestartSchedule& schedule);

}  // namespace modecast::nn
