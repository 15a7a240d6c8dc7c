#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace modecast::vmd {

/// Real-to-half-spectrum FFT pair for a fixed length, backed by FFTW.
/// Plans are created with deterministic heuristics; creation/destruction is
/// serialized internally, so independent instances may be used from
/// different threads.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const { return length_; }
  std::size_t bins() const { return length_ / 2 + 1; }

  /// Forward transform onto the non-negative frequency bins.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

  /// Inverse transform; conjugate symmetry is implied by the half-spectrum
  /// representation. Output is scaled by 1/length.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

  /// Normalized frequency grid: bin i maps to i/length cycles/sample.
  std::vector<double> frequency_grid() const;

 private:
  std::size_t length_;
  void* plan_forward_;
  void* plan_inverse_;
  double* real_buf_;
  void* complex_buf_;
};

}  // namespace modecast::vmd
