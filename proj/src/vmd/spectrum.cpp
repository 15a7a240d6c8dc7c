#include "modecast/vmd/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace modecast::vmd {

namespace {
// FFTW plan creation/destruction mutates global planner state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t length) : length_(length) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_buf_ = fftw_alloc_real(length_);
  complex_buf_ = fftw_alloc_complex(bins());
  auto* cbuf = static_cast<fftw_complex*>(complex_buf_);
  plan_forward_ =
      fftw_plan_dft_r2c_1d(static_cast<int>(length_), real_buf_, cbuf,
                           FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  plan_inverse_ =
      fftw_plan_dft_c2r_1d(static_cast<int>(length_), cbuf, real_buf_,
                           FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  fftw_free(real_buf_);
  fftw_free(static_cast<fftw_complex*>(complex_buf_));
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  const auto* cbuf = static_cast<const fftw_complex*>(complex_buf_);
  for (std::size_t i = 0; i < bins(); ++i) {
    out[i] = {cbuf[i][0], cbuf[i][1]};
  }
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  auto* cbuf = static_cast<fftw_complex*>(complex_buf_);
  for (std::size_t i = 0; i < bins(); ++i) {
    cbuf[i][0] = in[i].real();
    cbuf[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  const double scale = 1.0 / static_cast<double>(length_);
  for (std::size_t i = 0; i < length_; ++i) out[i] = real_buf_[i] * scale;
}

std::vector<double> RealFft::frequency_grid() const {
  std::vector<double> grid(bins());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(length_);
  }
  return grid;
}

}  // namespace modecast::vmd
