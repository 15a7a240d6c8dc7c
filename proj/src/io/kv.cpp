#include "modecast/io/kv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "modecast/errors.hpp"

namespace modecast::io {

std::string double_to_hex(double v) {
  char buf[48];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

double double_from_hex(const std::string& s) {
  double v = 0.0;
  const auto res =
      std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::parse, "kv: malformed hex float '" + s + "'");
  }
  return v;
}

std::string double_to_decimal(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void KvFile::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void KvFile::set(const std::string& key, double value) {
  set(key, double_to_decimal(value));
}
void KvFile::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}
void KvFile::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

bool KvFile::has(const std::string& key) const { return find(key) != nullptr; }

const std::string* KvFile::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string KvFile::require(const std::string& key) const {
  const std::string* v = find(key);
  if (v == nullptr) fail(ErrorKind::parse, "kv: missing key '" + key + "'");
  return *v;
}

double KvFile::require_double(const std::string& key) const {
  const std::string s = require(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::parse, "kv: key '" + key + "' is not a number: '" + s + "'");
  }
}

std::uint64_t KvFile::require_uint(const std::string& key) const {
  const std::string s = require(key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::parse, "kv: key '" + key + "' is not an integer: '" + s + "'");
  }
  return v;
}

bool KvFile::require_bool(const std::string& key) const {
  const std::string s = require(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(ErrorKind::parse, "kv: key '" + key + "' is not a boolean: '" + s + "'");
}

std::string KvFile::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k + " = " + v + '\n';
  }
  return out;
}

KvFile KvFile::parse_text(const std::string& text) {
  KvFile kv;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::parse,
           "kv: line " + std::to_string(line_no) + " has no '='");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv.entries_.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

void KvFile::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

KvFile KvFile::load(const std::filesystem::path& path) {
  return parse_text(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace modecast::io
