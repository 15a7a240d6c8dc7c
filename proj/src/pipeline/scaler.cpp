#include "modecast/pipeline/scaler.hpp"

#include <algorithm>

#include "modecast/errors.hpp"

namespace modecast::pipeline {

std::vector<double> Scaler::apply_all(std::span<const double> values) const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = apply(values[i]);
  return out;
}

Scaler Scaler::fit(std::span<const double> series, std::size_t fit_len) {
  if (fit_len < 2 || fit_len > series.size()) {
    fail(ErrorKind::spec, "scaler: fit range must hold at least 2 samples");
  }
  const auto [lo, hi] =
      std::minmax_element(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(fit_len));
  if (*hi <= *lo) {
    fail(ErrorKind::degenerate_scale,
         "scaler: constant fit range, min-max normalization undefined");
  }
  return Scaler{*lo, *hi};
}

}  // namespace modecast::pipeline
