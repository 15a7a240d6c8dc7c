#pragma once

#include <cstddef>

namespace modecast::kernels {

enum class Backend { scalar, avx2 };

/// The data-parallel inner loops behind the decomposition engine and the
/// network math. Every entry has a scalar reference implementation and may
/// have SIMD variants with the same contract; variants are equivalence-tested
/// against the scalar table. The active table is picked once at runtime from
/// CPU features and can be overridden with MODECAST_KERNELS=scalar|avx2 or
/// force_backend().
///
/// Complex spectra are interleaved (re, im) pairs; `n` counts bins, so the
/// underlying array holds 2n doubles.
struct KernelTable {
  /// y = W x + b, W row-major (rows x cols).
  void (*affine)(const double* w, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols);
  /// dx += W^T dy.
  void (*matvec_transpose_acc)(const double* w, const double* dy, double* dx,
                               std::size_t rows, std::size_t cols);
  /// dW += dy x^T.
  void (*outer_product_acc)(const double* dy, const double* x, double* dw,
                            std::size_t rows, std::size_t cols);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  /// Adam moment update and parameter step; inv_bc1/inv_bc2 are the
  /// precomputed 1/(1-beta^t) bias corrections.
  void (*adam_update)(double* p, const double* g, double* m, double* v,
                      std::size_t n, double beta1, double beta2, double inv_bc1,
                      double inv_bc2, double lr, double eps);
  /// out_i = (f_i - sum_i + old_i + lambda_i/2) / (1 + 2 alpha (freq_i - omega)^2).
  void (*wiener_filter)(const double* f, const double* sum_all,
                        const double* mode_old, const double* lambda,
                        const double* freq, double omega, double alpha,
                        double* out, std::size_t n);
  /// num = sum_i freq_i |s_i|^2 ; den = sum_i |s_i|^2.
  void (*spectral_moments)(const double* s, const double* freq, std::size_t n,
                           double* num, double* den);
  /// diff = sum_i |a_i - b_i|^2 ; ref = sum_i |b_i|^2.
  void (*complex_diff_energy)(const double* a, const double* b, std::size_t n,
                              double* diff, double* ref);
  /// acc_j += plus_j - minus_j over n2 doubles.
  void (*accumulate_replace)(double* acc, const double* plus,
                             const double* minus, std::size_t n2);
  /// lambda_j += tau (f_j - sum_j) over n2 doubles.
  void (*dual_ascent)(double* lambda, const double* f, const double* sum,
                      double tau, std::size_t n2);
};

const KernelTable& scalar_table();

bool backend_available(Backend b);
const char* backend_name(Backend b);

/// Table selected for this process (feature probe + env override).
const KernelTable& active();
Backend active_backend();

/// Override the selection; used by the equivalence tests and for forcing
/// reproducible scalar runs. Throws if the backend is not available.
void force_backend(Backend b);

}  // namespace modecast::kernels
