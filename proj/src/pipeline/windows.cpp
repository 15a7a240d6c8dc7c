#include "modecast/pipeline/windows.hpp"

#include <algorithm>

#include "modecast/errors.hpp"

namespace modecast::pipeline {

std::pair<std::size_t, std::size_t> chronological_split(std::size_t n_samples,
                                                        double in_fraction) {
  if (n_samples < 5) fail(ErrorKind::spec, "split: need at least 5 samples");
  if (in_fraction <= 0.0 || in_fraction >= 1.0) {
    fail(ErrorKind::spec, "split: fraction must be in (0, 1)");
  }
  const auto in_count = static_cast<std::size_t>(
      std::floor(in_fraction * static_cast<double>(n_samples)));
  return {in_count, n_samples - in_count};
}

WindowedDataset WindowedDataset::subset(std::size_t first,
                                        std::size_t count) const {
  if (first + count > num_samples) {
    fail(ErrorKind::spec, "windows: subset out of range");
  }
  WindowedDataset out;
  out.num_samples = count;
  out.height = height;
  out.length = length;
  const std::size_t stride = height * length;
  out.inputs.assign(inputs.begin() + static_cast<std::ptrdiff_t>(first * stride),
                    inputs.begin() + static_cast<std::ptrdiff_t>((first + count) * stride));
  out.targets.assign(targets.begin() + static_cast<std::ptrdiff_t>(first),
                     targets.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.target_indices.assign(
      target_indices.begin() + static_cast<std::ptrdiff_t>(first),
      target_indices.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

std::size_t WindowedDataset::count_targets_before(std::size_t boundary) const {
  const auto it = std::lower_bound(target_indices.begin(),
                                   target_indices.end(), boundary);
  return static_cast<std::size_t>(it - target_indices.begin());
}

WindowedDataset make_windows(const Matrix& mode_matrix,
                             std::span<const double> normalized_series,
                             std::size_t seq_len) {
  const std::size_t n = normalized_series.size();
  if (mode_matrix.cols != n) {
    fail(ErrorKind::shape, "windows: mode matrix and series lengths differ");
  }
  if (seq_len < 1) fail(ErrorKind::spec, "windows: sequence length must be >= 1");
  if (n <= seq_len) {
    fail(ErrorKind::too_short,
         "windows: series of length " + std::to_string(n) +
             " cannot supply windows of length " + std::to_string(seq_len));
  }
  WindowedDataset out;
  out.num_samples = n - seq_len;
  out.height = mode_matrix.rows;
  out.length = seq_len;
  out.inputs.resize(out.num_samples * out.height * seq_len);
  out.targets.resize(out.num_samples);
  out.target_indices.resize(out.num_samples);
  for (std::size_t s = 0; s < out.num_samples; ++s) {
    double* block = out.inputs.data() + s * out.height * seq_len;
    for (std::size_t r = 0; r < out.height; ++r) {
      for (std::size_t c = 0; c < seq_len; ++c) {
        block[r * seq_len + c] = mode_matrix.at(r, s + c);
      }
    }
    out.targets[s] = normalized_series[s + seq_len];
    out.target_indices[s] = s + seq_len;
  }
  return out;
}

WindowedDataset make_windows_causal(std::span<const double> normalized_series,
                                    const vmd::VmdConfig& vmd_config,
                                    std::size_t seq_len) {
  const std::size_t n = normalized_series.size();
  if (n <= seq_len) {
    fail(ErrorKind::too_short, "windows: series too short for causal windows");
  }
  const std::size_t min_prefix =
      std::max<std::size_t>({seq_len, 16, 4 * vmd_config.num_modes});
  if (n <= min_prefix) {
    fail(ErrorKind::too_short,
         "windows: series too short for a causal decomposition prefix");
  }
  WindowedDataset out;
  out.height = vmd_config.num_modes;
  out.length = seq_len;
  for (std::size_t t = min_prefix; t < n; ++t) {
    const vmd::ModeSet prefix =
        vmd::decompose(normalized_series.subspan(0, t), vmd_config);
    for (std::size_t r = 0; r < out.height; ++r) {
      for (std::size_t c = 0; c < seq_len; ++c) {
        out.inputs.push_back(prefix.modes.at(r, t - seq_len + c));
      }
    }
    out.targets.push_back(normalized_series[t]);
    out.target_indices.push_back(t);
    ++out.num_samples;
  }
  return out;
}

}  // namespace modecast::pipeline
