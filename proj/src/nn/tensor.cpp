#include "modecast/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "modecast/errors.hpp"

namespace modecast::nn {

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t p = 1;
  for (std::size_t d : shape) p *= d;
  return p;
}

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  data.assign(shape_product(shape), 0.0);
}

void Tensor::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

void Tensor::zero_grad() {
  if (grad.empty()) {
    grad.assign(data.size(), 0.0);
  } else {
    std::fill(grad.begin(), grad.end(), 0.0);
  }
}

void Tensor::check(const std::string& label) const {
  if (shape_product(shape) != data.size()) {
    fail(ErrorKind::shape, "tensor " + label + ": shape/data mismatch");
  }
  if (!grad.empty() && grad.size() != data.size()) {
    fail(ErrorKind::shape, "tensor " + label + ": grad length mismatch");
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::training_diverged,
           "tensor " + label + ": non-finite value");
    }
  }
}

}  // namespace modecast::nn
