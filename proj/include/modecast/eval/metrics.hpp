#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace modecast::eval {

/// Accuracy over aligned actual/prediction pairs, in the series' original
/// units. mape is absent when any actual value is zero.
struct MetricReport {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> mape_percent;
  std::size_t n = 0;
};

MetricReport compute_metrics(std::span<const double> actuals,
                             std::span<const double> predictions);

}  // namespace modecast::eval
