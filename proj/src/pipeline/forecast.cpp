#include "modecast/pipeline/forecast.hpp"

#include "modecast/errors.hpp"

namespace modecast::pipeline {

std::vector<double> forecast_windows(const nn::Model& model,
                                     const WindowedDataset& windows,
                                     const Scaler& scaler) {
  if (windows.height != model.window_height() ||
      windows.length != model.seq_len()) {
    fail(ErrorKind::spec, "forecast: windows do not match the model spec");
  }
  std::vector<double> out(windows.num_samples);
  for (std::size_t s = 0; s < windows.num_samples; ++s) {
    out[s] = scaler.invert(model.predict_const(windows.sample(s)));
  }
  return out;
}

std::vector<double> forecast_series(const nn::Model& model,
                                    const Matrix& mode_matrix,
                                    std::span<const double> normalized_series,
                                    const Scaler& scaler) {
  const WindowedDataset windows =
      make_windows(mode_matrix, normalized_series, model.seq_len());
  return forecast_windows(model, windows, scaler);
}

}  // namespace modecast::pipeline
