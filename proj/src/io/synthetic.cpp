#include "modecast/io/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "modecast/errors.hpp"
#include "modecast/rng.hpp"

namespace modecast::io {

TimeSeries generate_synthetic(const SynthSpec& spec) {
  if (spec.n < 32) fail(ErrorKind::spec, "synth: need n >= 32");
  if (std::abs(spec.ar1_coeff) >= 1.0) {
    fail(ErrorKind::spec, "synth: AR(1) coefficient must satisfy |a| < 1");
  }
  if (spec.noise_std < 0.0) fail(ErrorKind::spec, "synth: negative noise std");
  for (const auto& [freq, amp] : spec.tones) {
    if (!std::isfinite(freq) || !std::isfinite(amp)) {
      fail(ErrorKind::spec, "synth: non-finite tone parameters");
    }
  }

  TimeSeries ts;
  ts.name = "synthetic";
  ts.timestamps.reserve(spec.n);
  ts.values.reserve(spec.n);

  Rng rng(spec.seed);
  double ar_state = 0.0;
  for (std::size_t t = 0; t < spec.n; ++t) {
    double v = spec.trend_slope * static_cast<double>(t);
    for (const auto& [freq, amp] : spec.tones) {
      v += amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t));
    }
    if (spec.noise_std > 0.0) {
      ar_state = spec.ar1_coeff * ar_state + spec.noise_std * rng.normal();
      v += ar_state;
    }
    ts.timestamps.push_back(std::to_string(t));
    ts.values.push_back(v);
  }
  return ts;
}

}  // namespace modecast::io
