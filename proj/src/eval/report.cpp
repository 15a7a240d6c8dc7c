#include "modecast/eval/report.hpp"

#include <algorithm>
#include <cstdio>

#include "modecast/errors.hpp"

namespace modecast::eval {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string mape_str(const std::optional<double>& mape) {
  return mape ? fmt("%.2f%%", *mape) : std::string("n/a");
}

std::string dm_cell(const std::optional<DmResult>& cell) {
  if (!cell) return "";
  return fmt("%.4f", cell->statistic) + " (" + fmt("%.4f", cell->p_two_sided) + ")";
}

std::string pad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string metrics_table_csv(std::span<const ModelMetrics> rows) {
  std::string out =
      "model,in_rmse,in_mae,in_mape,out_rmse,out_mae,out_mape\n";
  for (const auto& r : rows) {
    out += r.name + ',' + fmt("%.4f", r.in_sample.rmse) + ',' +
           fmt("%.4f", r.in_sample.mae) + ',' + mape_str(r.in_sample.mape_percent) +
           ',' + fmt("%.4f", r.out_of_sample.rmse) + ',' +
           fmt("%.4f", r.out_of_sample.mae) + ',' +
           mape_str(r.out_of_sample.mape_percent) + '\n';
  }
  return out;
}

namespace {

std::string metrics_table_grid(std::span<const ModelMetrics> rows,
                               bool markdown) {
  const std::vector<std::string> header = {"model",    "in RMSE",  "in MAE",
                                           "in MAPE",  "out RMSE", "out MAE",
                                           "out MAPE"};
  std::vector<std::vector<std::string>> grid;
  grid.push_back(header);
  for (const auto& r : rows) {
    grid.push_back({r.name, fmt("%.4f", r.in_sample.rmse),
                    fmt("%.4f", r.in_sample.mae),
                    mape_str(r.in_sample.mape_percent),
                    fmt("%.4f", r.out_of_sample.rmse),
                    fmt("%.4f", r.out_of_sample.mae),
                    mape_str(r.out_of_sample.mape_percent)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (markdown) {
        line += "| " + pad(grid[r][c], widths[c]) + ' ';
      } else {
        line += pad(grid[r][c], widths[c] + 2);
      }
    }
    if (markdown) line += "|";
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0 && markdown) {
      std::string sep;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        sep += "|" + std::string(widths[c] + 2, '-');
      }
      out += sep + "|\n";
    }
  }
  return out;
}

}  // namespace

std::string metrics_table_text(std::span<const ModelMetrics> rows) {
  return metrics_table_grid(rows, false);
}

std::string metrics_table_markdown(std::span<const ModelMetrics> rows) {
  return metrics_table_grid(rows, true);
}

DmMatrix dm_matrix(std::span<const std::string> names,
                   std::span<const std::vector<double>> errors) {
  DmMatrix matrix;
  matrix.names.assign(names.begin(), names.end());
  const std::size_t n = names.size();
  matrix.cells.assign(n, std::vector<std::optional<DmResult>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        matrix.cells[i][j] = dm_test(errors[i], errors[j]);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::zero_variance) throw;
      }
    }
  }
  return matrix;
}

std::string dm_table_csv(const DmMatrix& matrix) {
  std::string out = "tested";
  for (const auto& name : matrix.names) out += ',' + name;
  out += '\n';
  for (std::size_t i = 0; i < matrix.names.size(); ++i) {
    out += matrix.names[i];
    for (std::size_t j = 0; j < matrix.names.size(); ++j) {
      out += ',';
      out += dm_cell(matrix.cells[i][j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string dm_table_grid(const DmMatrix& matrix, bool markdown) {
  const std::size_t n = matrix.names.size();
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"tested"};
  header.insert(header.end(), matrix.names.begin(), matrix.names.end());
  grid.push_back(header);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row = {matrix.names[i]};
    for (std::size_t j = 0; j < n; ++j) row.push_back(dm_cell(matrix.cells[i][j]));
    grid.push_back(row);
  }
  std::vector<std::size_t> widths(n + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (markdown) {
        line += "| " + pad(grid[r][c], widths[c]) + ' ';
      } else {
        line += pad(grid[r][c], widths[c] + 2);
      }
    }
    if (markdown) line += "|";
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0 && markdown) {
      std::string sep;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        sep += "|" + std::string(widths[c] + 2, '-');
      }
      out += sep + "|\n";
    }
  }
  return out;
}

}  // namespace

std::string dm_table_text(const DmMatrix& matrix) {
  return dm_table_grid(matrix, false);
}

std::string dm_table_markdown(const DmMatrix& matrix) {
  return dm_table_grid(matrix, true);
}

}  // namespace modecast::eval
