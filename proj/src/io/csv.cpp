#include "modecast/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "modecast/errors.hpp"
#include "modecast/io/kv.hpp"

namespace modecast::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    *out = std::stod(s, &used);
    return used == s.size() && std::isfinite(*out);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path,
                    const std::string& value_column, bool skip_missing) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) fail(ErrorKind::empty_series, path.string() + ": no rows");

  // resolve the value column: header name first, then numeric index
  std::size_t col = 0;
  std::size_t data_start = 0;
  const auto& first = rows.front();
  const auto named = std::find(first.begin(), first.end(), value_column);
  if (named != first.end()) {
    col = static_cast<std::size_t>(named - first.begin());
    data_start = 1;
  } else {
    std::size_t idx = 0;
    const auto res = std::from_chars(
        value_column.data(), value_column.data() + value_column.size(), idx);
    if (res.ec != std::errc{} ||
        res.ptr != value_column.data() + value_column.size()) {
      fail(ErrorKind::parse,
           path.string() + ": no column named '" + value_column + "'");
    }
    col = idx;
    double probe = 0.0;
    data_start = (first.size() > col && parse_double(first[col], &probe)) ? 0 : 1;
  }

  TimeSeries ts;
  ts.name = path.stem().string();
  for (std::size_t r = data_start; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    const std::string cell = col < fields.size() ? fields[col] : std::string{};
    double value = 0.0;
    if (!parse_double(cell, &value)) {
      if (skip_missing) continue;
      fail(ErrorKind::parse, path.string() + ": row " + std::to_string(r + 1) +
                                 ": bad value '" + cell + "'");
    }
    ts.timestamps.push_back(fields.empty() ? std::string{} : fields[0]);
    ts.values.push_back(value);
  }
  if (ts.values.empty()) {
    fail(ErrorKind::empty_series, path.string() + ": no usable rows");
  }
  return ts;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts) {
  std::string out = "timestamp,value\n";
  for (std::size_t i = 0; i < ts.values.size(); ++i) {
    out += ts.timestamps[i] + ',' + double_to_decimal(ts.values[i]) + '\n';
  }
  write_file(path, out);
}

void write_modes_csv(const std::filesystem::path& path,
                     const vmd::ModeSet& modes) {
  std::string header = "t";
  for (std::size_t m = 0; m < modes.modes.rows; ++m) {
    header += ",mode_" + std::to_string(m + 1);
  }
  header += ",residual\n";
  std::string out = header;
  for (std::size_t i = 0; i < modes.residual.size(); ++i) {
    out += std::to_string(i);
    for (std::size_t m = 0; m < modes.modes.rows; ++m) {
      out += ',' + double_to_decimal(modes.modes.at(m, i));
    }
    out += ',' + double_to_decimal(modes.residual[i]) + '\n';
  }
  write_file(path, out);
}

void write_predictions_csv(const std::filesystem::path& path,
                           std::span<const std::size_t> target_indices,
                           std::span<const double> predictions) {
  std::string out = "index,prediction\n";
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out += std::to_string(target_indices[i]) + ',' +
           double_to_decimal(predictions[i]) + '\n';
  }
  write_file(path, out);
}

std::vector<std::pair<std::size_t, double>> load_predictions_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::pair<std::size_t, double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "index") continue;
    if (fields.size() < 2) {
      fail(ErrorKind::parse,
           path.string() + ": row " + std::to_string(line_no) + ": expected index,prediction");
    }
    std::size_t idx = 0;
    const auto res = std::from_chars(fields[0].data(),
                                     fields[0].data() + fields[0].size(), idx);
    double value = 0.0;
    if (res.ec != std::errc{} || !parse_double(fields[1], &value)) {
      fail(ErrorKind::parse,
           path.string() + ": row " + std::to_string(line_no) + ": bad entry");
    }
    out.emplace_back(idx, value);
  }
  if (out.empty()) fail(ErrorKind::empty_series, path.string() + ": no predictions");
  return out;
}

void write_curve_csv(const std::filesystem::path& path,
                     std::span<const pipeline::CurvePoint> curve) {
  std::string out = "epoch,lr,train_mse\n";
  for (const auto& p : curve) {
    out += std::to_string(p.epoch) + ',' + double_to_decimal(p.lr) + ',' +
           double_to_decimal(p.train_mse) + '\n';
  }
  write_file(path, out);
}

}  // namespace modecast::io
