#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "modecast/matrix.hpp"
#include "modecast/vmd/vmd.hpp"

namespace modecast::pipeline {

/// Time-ordered split: in-sample count is floor(in_fraction * n_samples).
std::pair<std::size_t, std::size_t> chronological_split(
    std::size_t n_samples, double in_fraction = 0.8);

/// Supervised one-step-ahead samples: each input is the height x length
/// block of mode columns ending just before the target index.
struct WindowedDataset {
  std::size_t num_samples = 0;
  std::size_t height = 0;
  std::size_t length = 0;
  std::vector<double> inputs;  // num_samples x height x length
  std::vector<double> targets;
  std::vector<std::size_t> target_indices;

  MatrixView sample(std::size_t s) const {
    return {height, length, inputs.data() + s * height * length};
  }

  /// Contiguous sample range [first, first + count).
  WindowedDataset subset(std::size_t first, std::size_t count) const;

  /// Number of leading samples whose target index is < boundary.
  std::size_t count_targets_before(std::size_t boundary) const;
};

WindowedDataset make_windows(const Matrix& mode_matrix,
                             std::span<const double> normalized_series,
                             std::size_t seq_len);

/// Leak-free variant: the window for target t is cut from a decomposition
/// of the prefix [0, t) only. Targets whose prefix is too short for the
/// decomposition are dropped, so the dataset may start later than seq_len.
WindowedDataset make_windows_causal(std::span<const double> normalized_series,
                                    const vmd::VmdConfig& vmd_config,
                                    std::size_t seq_len);

}  // namespace modecast::pipeline
