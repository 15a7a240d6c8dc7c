#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "modecast/kernels/kernels.hpp"
#include "modecast/rng.hpp"

using modecast::Rng;
namespace kernels = modecast::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

// sizes straddling the SIMD widths, including ragged tails
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 13, 16, 31, 64, 129};

bool close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace

TEST_CASE("scalar dot and affine agree with naive loops") {
  const auto& k = kernels::scalar_table();
  Rng rng(7);
  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    double expect = 0.0;
    for (std::size_t i = 0; i < n; ++i) expect += a[i] * b[i];
    CHECK(close(k.dot(a.data(), b.data(), n), expect, 1e-13));
  }

  const std::size_t rows = 5, cols = 13;
  const auto w = random_vec(rng, rows * cols);
  const auto x = random_vec(rng, cols);
  const auto bias = random_vec(rng, rows);
  std::vector<double> y(rows);
  k.affine(w.data(), x.data(), bias.data(), y.data(), rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double expect = bias[r];
    for (std::size_t c = 0; c < cols; ++c) expect += w[r * cols + c] * x[c];
    CHECK(close(y[r], expect, 1e-13));
  }
}

TEST_CASE("scalar wiener filter matches the band formula") {
  const auto& k = kernels::scalar_table();
  const std::size_t n = 4;
  // one nonzero bin at distance 0.1 from omega with alpha = 2000:
  // denominator = 1 + 2*2000*0.01 = 41
  std::vector<double> f(2 * n, 0.0), sum(2 * n, 0.0), old(2 * n, 0.0),
      lam(2 * n, 0.0), out(2 * n, 0.0);
  std::vector<double> freq = {0.0, 0.1, 0.2, 0.3};
  f[2 * 2] = 82.0;  // re at bin 0.2
  f[2 * 2 + 1] = 41.0;
  k.wiener_filter(f.data(), sum.data(), old.data(), lam.data(), freq.data(),
                  0.1, 2000.0, out.data(), n);
  CHECK(out[4] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out[5] == doctest::Approx(1.0).epsilon(1e-12));
  // at the center frequency the denominator is 1
  CHECK(out[2] == doctest::Approx(f[2]).epsilon(1e-12));
}

#ifdef __x86_64__
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kernels::backend_available(kernels::Backend::avx2)) {
    MESSAGE("avx2 not available on this host, skipping");
    return;
  }
  kernels::force_backend(kernels::Backend::avx2);
  const auto& simd = kernels::active();
  const auto& ref = kernels::scalar_table();
  Rng rng(99);

  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng, n, 2.0);
    const auto b = random_vec(rng, n, 2.0);
    CHECK(close(simd.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n),
                1e-12));
    CHECK(close(simd.sum_sq_diff(a.data(), b.data(), n),
                ref.sum_sq_diff(a.data(), b.data(), n), 1e-12));
  }

  SUBCASE("affine / transpose / outer") {
    for (std::size_t rows : {1u, 3u, 8u, 12u}) {
      for (std::size_t cols : {1u, 5u, 16u, 21u}) {
        const auto w = random_vec(rng, rows * cols);
        const auto x = random_vec(rng, cols);
        const auto bias = random_vec(rng, rows);
        const auto dy = random_vec(rng, rows);
        std::vector<double> y1(rows), y2(rows);
        simd.affine(w.data(), x.data(), bias.data(), y1.data(), rows, cols);
        ref.affine(w.data(), x.data(), bias.data(), y2.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r) CHECK(close(y1[r], y2[r], 1e-12));

        auto dx1 = random_vec(rng, cols);
        auto dx2 = dx1;
        simd.matvec_transpose_acc(w.data(), dy.data(), dx1.data(), rows, cols);
        ref.matvec_transpose_acc(w.data(), dy.data(), dx2.data(), rows, cols);
        for (std::size_t c = 0; c < cols; ++c) CHECK(close(dx1[c], dx2[c], 1e-12));

        auto dw1 = random_vec(rng, rows * cols);
        auto dw2 = dw1;
        simd.outer_product_acc(dy.data(), x.data(), dw1.data(), rows, cols);
        ref.outer_product_acc(dy.data(), x.data(), dw2.data(), rows, cols);
        for (std::size_t i = 0; i < rows * cols; ++i) {
          CHECK(close(dw1[i], dw2[i], 1e-12));
        }
      }
    }
  }

  SUBCASE("adam update") {
    for (std::size_t n : kSizes) {
      auto p1 = random_vec(rng, n);
      auto p2 = p1;
      const auto g = random_vec(rng, n);
      auto m1 = random_vec(rng, n, 0.1);
      auto m2 = m1;
      auto v1 = random_vec(rng, n, 0.1);
      for (double& x : v1) x = std::abs(x);
      auto v2 = v1;
      simd.adam_update(p1.data(), g.data(), m1.data(), v1.data(), n, 0.9,
                       0.999, 1.0 / 0.1, 1.0 / 0.001, 1e-3, 1e-8);
      ref.adam_update(p2.data(), g.data(), m2.data(), v2.data(), n, 0.9, 0.999,
                      1.0 / 0.1, 1.0 / 0.001, 1e-3, 1e-8);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(close(p1[i], p2[i], 1e-13));
        CHECK(close(m1[i], m2[i], 1e-13));
        CHECK(close(v1[i], v2[i], 1e-13));
      }
    }
  }

  SUBCASE("spectral kernels") {
    for (std::size_t n : kSizes) {
      const auto a = random_vec(rng, 2 * n);
      const auto b = random_vec(rng, 2 * n);
      const auto lam = random_vec(rng, 2 * n);
      const auto old = random_vec(rng, 2 * n);
      std::vector<double> freq(n);
      for (std::size_t i = 0; i < n; ++i) {
        freq[i] = 0.5 * static_cast<double>(i) / static_cast<double>(n);
      }

      std::vector<double> out1(2 * n), out2(2 * n);
      simd.wiener_filter(a.data(), b.data(), old.data(), lam.data(),
                         freq.data(), 0.17, 2000.0, out1.data(), n);
      ref.wiener_filter(a.data(), b.data(), old.data(), lam.data(), freq.data(),
                        0.17, 2000.0, out2.data(), n);
      for (std::size_t i = 0; i < 2 * n; ++i) CHECK(close(out1[i], out2[i], 1e-12));

      double n1, d1, n2, d2;
      simd.spectral_moments(a.data(), freq.data(), n, &n1, &d1);
      ref.spectral_moments(a.data(), freq.data(), n, &n2, &d2);
      CHECK(close(n1, n2, 1e-12));
      CHECK(close(d1, d2, 1e-12));

      double diff1, ref1, diff2, ref2;
      simd.complex_diff_energy(a.data(), b.data(), n, &diff1, &ref1);
      ref.complex_diff_energy(a.data(), b.data(), n, &diff2, &ref2);
      CHECK(close(diff1, diff2, 1e-12));
      CHECK(close(ref1, ref2, 1e-12));

      auto acc1 = random_vec(rng, 2 * n);
      auto acc2 = acc1;
      simd.accumulate_replace(acc1.data(), a.data(), b.data(), 2 * n);
      ref.accumulate_replace(acc2.data(), a.data(), b.data(), 2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) CHECK(close(acc1[i], acc2[i], 1e-13));

      auto lam1 = lam;
      auto lam2 = lam;
      simd.dual_ascent(lam1.data(), a.data(), b.data(), 0.37, 2 * n);
      ref.dual_ascent(lam2.data(), a.data(), b.data(), 0.37, 2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) CHECK(close(lam1[i], lam2[i], 1e-13));
    }
  }

  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::force_backend(kernels::Backend::avx2);
}
#endif  // __x86_64__
