#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modecast/eval/dm.hpp"
#include "modecast/eval/metrics.hpp"

namespace modecast::eval {

struct ModelMetrics {
  std::string name;
  MetricReport in_sample;
  MetricReport out_of_sample;
};

std::string metrics_table_csv(std::span<const ModelMetrics> rows);
std::string metrics_table_text(std::span<const ModelMetrics> rows);
std::string metrics_table_markdown(std::span<const ModelMetrics> rows);

/// Pairwise comparison matrix; cell (i, j) for j > i holds the test of
/// model i against reference model j. Cells without a defined statistic
/// (identical errors) are absent.
struct DmMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<DmResult>>> cells;
};

DmMatrix dm_matrix(std::span<const std::string> names,
                   std::span<const std::vector<double>> errors);

std::string dm_table_csv(const DmMatrix& matrix);
std::string dm_table_text(const DmMatrix& matrix);
std::string dm_table_markdown(const DmMatrix& matrix);

}  // namespace modecast::eval
