#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modecast::pipeline {

/// Min-max normalization fitted on a prefix of the series (the in-sample
/// range). Values outside the fit range map outside [0, 1].
struct Scaler {
  double min = 0.0;
  double max = 1.0;

  double apply(double x) const { return (x - min) / (max - min); }
  double invert(double y) const { return min + y * (max - min); }

  std::vector<double> apply_all(std::span<const double> values) const;

  static Scaler fit(std::span<const double> series, std::size_t fit_len);
};

}  // namespace modecast::pipeline
