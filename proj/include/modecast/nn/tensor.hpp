#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace modecast::nn {

/// Flat row-major parameter/value storage with an optional gradient buffer
/// of the same length.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until ensure_grad()

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s);

  std::size_t size() const { return data.size(); }

  void ensure_grad();
  void zero_grad();

  /// Throws if the invariants (shape product == data length, grad length)
  /// are violated or any value is non-finite.
  void check(const std::string& label) const;
};

std::size_t shape_product(std::span<const std::size_t> shape);

}  // namespace modecast::nn
