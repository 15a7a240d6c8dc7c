#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modecast/io/csv.hpp"

namespace modecast::io {

/// Seeded stand-in series: a sum of sinusoids, a linear trend, and AR(1)
/// noise driven by Gaussian innovations.
struct SynthSpec {
  std::vector<std::pair<double, double>> tones;  // (cycles/sample, amplitude)
  double trend_slope = 0.0;
  double ar1_coeff = 0.0;
  double noise_std = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

TimeSeries generate_synthetic(const SynthSpec& spec);

}  // namespace modecast::io
