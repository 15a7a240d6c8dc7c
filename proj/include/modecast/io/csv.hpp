#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modecast/pipeline/train.hpp"
#include "modecast/vmd/vmd.hpp"

namespace modecast::io {

struct TimeSeries {
  std::vector<std::string> timestamps;
  std::vector<double> values;
  std::string name;
};

/// Comma-separated, plain fields (no quoting). The value column is matched
/// against the header by name, or taken as a 0-based index; a leading header
/// row is detected by whether the value cell parses as a number. Rows whose
/// value is empty or unparseable are dropped when skip_missing is set and
/// reported as parse errors otherwise.
TimeSeries load_csv(const std::filesystem::path& path,
                    const std::string& value_column, bool skip_missing);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts);

/// Header: t,mode_1..mode_K,residual.
void write_modes_csv(const std::filesystem::path& path,
                     const vmd::ModeSet& modes);

void write_predictions_csv(const std::filesystem::path& path,
                           std::span<const std::size_t> target_indices,
                           std::span<const double> predictions);

/// Returns (target index, prediction) pairs.
std::vector<std::pair<std::size_t, double>> load_predictions_csv(
    const std::filesystem::path& path);

/// Header: epoch,lr,train_mse.
void write_curve_csv(const std::filesystem::path& path,
                     std::span<const pipeline::CurvePoint> curve);

}  // namespace modecast::io
