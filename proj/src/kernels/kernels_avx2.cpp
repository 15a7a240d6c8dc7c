// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and is only entered through the dispatch table after a
// runtime CPU check, so the intrinsics here never execute on hosts
// without the extensions.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "modecast/kernels/kernels.hpp"

namespace modecast::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double dot_avx2_raw(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  return dot_avx2_raw(a, b, n);
}

void affine_avx2(const double* w, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_avx2_raw(w + r * cols, x, cols) + b[r];
  }
}

void matvec_transpose_acc_avx2(const double* w, const double* dy, double* dx,
                               std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    const __m256d g = _mm256_set1_pd(dy[r]);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d acc = _mm256_loadu_pd(dx + c);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + c), g, acc);
      _mm256_storeu_pd(dx + c, acc);
    }
    for (; c < cols; ++c) dx[c] += wr[c] * dy[r];
  }
}

void outer_product_acc_avx2(const double* dy, const double* x, double* dw,
                            std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dwr = dw + r * cols;
    const __m256d g = _mm256_set1_pd(dy[r]);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d acc = _mm256_loadu_pd(dwr + c);
      acc = _mm256_fmadd_pd(g, _mm256_loadu_pd(x + c), acc);
      _mm256_storeu_pd(dwr + c, acc);
    }
    for (; c < cols; ++c) dwr[c] += dy[r] * x[c];
  }
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void adam_update_avx2(double* p, const double* g, double* m, double* v,
                      std::size_t n, double beta1, double beta2,
                      double inv_bc1, double inv_bc2, double lr, double eps) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d one_minus_b1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d one_minus_b2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d bc1 = _mm256_set1_pd(inv_bc1);
  const __m256d bc2 = _mm256_set1_pd(inv_bc2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d vi = _mm256_loadu_pd(v + i);
    mi = _mm256_fmadd_pd(b1, mi, _mm256_mul_pd(one_minus_b1, gi));
    vi = _mm256_fmadd_pd(b2, vi,
                         _mm256_mul_pd(one_minus_b2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_mul_pd(mi, bc1);
    const __m256d v_hat = _mm256_mul_pd(vi, bc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(v_hat), veps);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, m_hat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] * inv_bc1) / (std::sqrt(v[i] * inv_bc2) + eps);
  }
}

void wiener_filter_avx2(const double* f, const double* sum_all,
                        const double* mode_old, const double* lambda,
                        const double* freq, double omega, double alpha,
                        double* out, std::size_t n) {
  const __m128d vomega = _mm_set1_pd(omega);
  const __m128d v2alpha = _mm_set1_pd(2.0 * alpha);
  const __m128d vone = _mm_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const std::size_t j = 2 * i;
    __m256d num = _mm256_sub_pd(_mm256_loadu_pd(f + j),
                                _mm256_loadu_pd(sum_all + j));
    num = _mm256_add_pd(num, _mm256_loadu_pd(mode_old + j));
    num = _mm256_fmadd_pd(half, _mm256_loadu_pd(lambda + j), num);
    // per-bin denominator, duplicated onto the (re, im) lanes
    const __m128d delta = _mm_sub_pd(_mm_loadu_pd(freq + i), vomega);
    const __m128d denom =
        _mm_add_pd(vone, _mm_mul_pd(v2alpha, _mm_mul_pd(delta, delta)));
    const __m256d denom_pairs = _mm256_insertf128_pd(
        _mm256_castpd128_pd256(_mm_unpacklo_pd(denom, denom)),
        _mm_unpackhi_pd(denom, denom), 1);
    _mm256_storeu_pd(out + j, _mm256_div_pd(num, denom_pairs));
  }
  for (; i < n; ++i) {
    const double delta = freq[i] - omega;
    const double denom = 1.0 + 2.0 * alpha * delta * delta;
    const std::size_t re = 2 * i;
    const std::size_t im = re + 1;
    out[re] = (f[re] - sum_all[re] + mode_old[re] + 0.5 * lambda[re]) / denom;
    out[im] = (f[im] - sum_all[im] + mode_old[im] + 0.5 * lambda[im]) / denom;
  }
}

void spectral_moments_avx2(const double* s, const double* freq, std::size_t n,
                           double* num, double* den) {
  // Each 4-double block is two bins; hadd leaves each |s|^2 twice, so the
  // accumulators are halved at the end.
  __m256d acc_num = _mm256_setzero_pd();
  __m256d acc_den = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(s + 2 * i);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d power = _mm256_hadd_pd(sq, sq);  // [p0 p0 p1 p1]
    const __m128d fr = _mm_loadu_pd(freq + i);
    const __m256d fr_pairs = _mm256_insertf128_pd(
        _mm256_castpd128_pd256(_mm_unpacklo_pd(fr, fr)),
        _mm_unpackhi_pd(fr, fr), 1);
    acc_den = _mm256_add_pd(acc_den, power);
    acc_num = _mm256_fmadd_pd(fr_pairs, power, acc_num);
  }
  double sum_num = 0.5 * hsum(acc_num);
  double sum_den = 0.5 * hsum(acc_den);
  for (; i < n; ++i) {
    const double re = s[2 * i];
    const double im = s[2 * i + 1];
    const double power = re * re + im * im;
    sum_num += freq[i] * power;
    sum_den += power;
  }
  *num = sum_num;
  *den = sum_den;
}

void complex_diff_energy_avx2(const double* a, const double* b, std::size_t n,
                              double* diff, double* ref) {
  __m256d acc_diff = _mm256_setzero_pd();
  __m256d acc_ref = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n2 = 2 * n;
  for (; i + 4 <= n2; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d d = _mm256_sub_pd(va, vb);
    acc_diff = _mm256_fmadd_pd(d, d, acc_diff);
    acc_ref = _mm256_fmadd_pd(vb, vb, acc_ref);
  }
  double sum_diff = hsum(acc_diff);
  double sum_ref = hsum(acc_ref);
  for (; i < n2; ++i) {
    const double d = a[i] - b[i];
    sum_diff += d * d;
    sum_ref += b[i] * b[i];
  }
  *diff = sum_diff;
  *ref = sum_ref;
}

void accumulate_replace_avx2(double* acc, const double* plus,
                             const double* minus, std::size_t n2) {
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d v = _mm256_loadu_pd(acc + i);
    v = _mm256_add_pd(v, _mm256_sub_pd(_mm256_loadu_pd(plus + i),
                                       _mm256_loadu_pd(minus + i)));
    _mm256_storeu_pd(acc + i, v);
  }
  for (; i < n2; ++i) acc[i] += plus[i] - minus[i];
}

void dual_ascent_avx2(double* lambda, const double* f, const double* sum,
                      double tau, std::size_t n2) {
  const __m256d vtau = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(f + i), _mm256_loadu_pd(sum + i));
    _mm256_storeu_pd(lambda + i,
                     _mm256_fmadd_pd(vtau, d, _mm256_loadu_pd(lambda + i)));
  }
  for (; i < n2; ++i) lambda[i] += tau * (f[i] - sum[i]);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      affine_avx2,
      matvec_transpose_acc_avx2,
      outer_product_acc_avx2,
      dot_avx2,
      sum_sq_diff_avx2,
      adam_update_avx2,
      wiener_filter_avx2,
      spectral_moments_avx2,
      complex_diff_energy_avx2,
      accumulate_replace_avx2,
      dual_ascent_avx2,
  };
  return table;
}

}  // namespace modecast::kernels

#endif  // __AVX2__ && __FMA__
