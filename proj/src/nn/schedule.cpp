#include "modecast/nn/schedule.hpp"

#include <cmath>
#include <numbers>

#include "modecast/errors.hpp"

namespace modecast::nn {

double lr_at(std::size_t epoch, const CosineRestartSchedule& schedule) {
  if (schedule.period < 1 || schedule.period_multiplier < 1) {
    fail(ErrorKind::spec, "schedule: period and multiplier must be >= 1");
  }
  std::size_t cycle_len = schedule.period;
  std::size_t pos = epoch;
  if (schedule.period_multiplier == 1) {
    pos = epoch % cycle_len;
  } else {
    while (pos >= cycle_len) {
      pos -= cycle_len;
      cycle_len *= schedule.period_multiplier;
    }
  }
  const double phase =
      static_cast<double>(pos) / static_cast<double>(cycle_len);
  return schedule.eta_min + 0.5 * (schedule.eta_max - schedule.eta_min) *
                                (1.0 + std::cos(std::numbers::pi * phase));
}

}  // namespace modecast::nn
