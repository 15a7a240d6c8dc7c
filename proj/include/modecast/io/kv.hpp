#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace modecast::io {

/// Exact text codecs for doubles. hex form is bit-exact by construction;
/// the decimal form uses 17 significant digits, which also round-trips.
std::string double_to_hex(double v);
double double_from_hex(const std::string& s);
std::string double_to_decimal(double v);

/// Ordered "key = value" text with '#' comments, used for metadata and run
/// configuration files.
class KvFile {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string* find(const std::string& key) const;
  std::string require(const std::string& key) const;
  double require_double(const std::string& key) const;
  std::uint64_t require_uint(const std::string& key) const;
  bool require_bool(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string serialize() const;
  static KvFile parse_text(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static KvFile load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace modecast::io
