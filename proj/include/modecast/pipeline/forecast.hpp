#pragma once

#include <span>
#include <vector>

#include "modecast/matrix.hpp"
#include "modecast/nn/model.hpp"
#include "modecast/pipeline/scaler.hpp"
#include "modecast/pipeline/windows.hpp"

namespace modecast::pipeline {

/// One-step-ahead predictions in original units for every window of the
/// series; output s corresponds to target index target_indices[s].
std::vector<double> forecast_windows(const nn::Model& model,
                                     const WindowedDataset& windows,
                                     const Scaler& scaler);

/// Convenience wrapper building the windows from a mode matrix first.
std::vector<double> forecast_series(const nn::Model& model,
                                    const Matrix& mode_matrix,
                                    std::span<const double> normalized_series,
                                    const Scaler& scaler);

}  // namespace modecast::pipeline
