// Scalar reference kernels. These are the ground truth the SIMD variants are
// tested against; keep them simple and obviously correct.

#include <cmath>
#include <cstddef>

#include "modecast/kernels/kernels.hpp"

namespace modecast::kernels {

namespace {

void affine_scalar(const double* w, const double* x, const double* b,
                   double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc + b[r];
  }
}

void matvec_transpose_acc_scalar(const double* w, const double* dy, double* dx,
                                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    const double g = dy[r];
    for (std::size_t c = 0; c < cols; ++c) dx[c] += wr[c] * g;
  }
}

void outer_product_acc_scalar(const double* dy, const double* x, double* dw,
                              std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dwr = dw + r * cols;
    const double g = dy[r];
    for (std::size_t c = 0; c < cols; ++c) dwr[c] += g * x[c];
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void adam_update_scalar(double* p, const double* g, double* m, double* v,
                        std::size_t n, double beta1, double beta2,
                        double inv_bc1, double inv_bc2, double lr, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double m_hat = m[i] * inv_bc1;
    const double v_hat = v[i] * inv_bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

void wiener_filter_scalar(const double* f, const double* sum_all,
                          const double* mode_old, const double* lambda,
                          const double* freq, double omega, double alpha,
                          double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = freq[i] - omega;
    const double denom = 1.0 + 2.0 * alpha * delta * delta;
    const std::size_t re = 2 * i;
    const std::size_t im = re + 1;
    out[re] = (f[re] - sum_all[re] + mode_old[re] + 0.5 * lambda[re]) / denom;
    out[im] = (f[im] - sum_all[im] + mode_old[im] + 0.5 * lambda[im]) / denom;
  }
}

void spectral_moments_scalar(const double* s, const double* freq,
                             std::size_t n, double* num, double* den) {
  double acc_num = 0.0;
  double acc_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = s[2 * i];
    const double im = s[2 * i + 1];
    const double power = re * re + im * im;
    acc_num += freq[i] * power;
    acc_den += power;
  }
  *num = acc_num;
  *den = acc_den;
}

void complex_diff_energy_scalar(const double* a, const double* b,
                                std::size_t n, double* diff, double* ref) {
  double acc_diff = 0.0;
  double acc_ref = 0.0;
  for (std::size_t i = 0; i < 2 * n; i += 2) {
    const double dre = a[i] - b[i];
    const double dim = a[i + 1] - b[i + 1];
    acc_diff += dre * dre + dim * dim;
    acc_ref += b[i] * b[i] + b[i + 1] * b[i + 1];
  }
  *diff = acc_diff;
  *ref = acc_ref;
}

void accumulate_replace_scalar(double* acc, const double* plus,
                               const double* minus, std::size_t n2) {
  for (std::size_t i = 0; i < n2; ++i) acc[i] += plus[i] - minus[i];
}

void dual_ascent_scalar(double* lambda, const double* f, const double* sum,
                        double tau, std::size_t n2) {
  for (std::size_t i = 0; i < n2; ++i) lambda[i] += tau * (f[i] - sum[i]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      affine_scalar,
      matvec_transpose_acc_scalar,
      outer_product_acc_scalar,
      dot_scalar,
      sum_sq_diff_scalar,
      adam_update_scalar,
      wiener_filter_scalar,
      spectral_moments_scalar,
      complex_diff_energy_scalar,
      accumulate_replace_scalar,
      dual_ascent_scalar,
  };
  return table;
}

}  // namespace modecast::kernels
