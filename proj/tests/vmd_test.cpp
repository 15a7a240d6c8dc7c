#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "modecast/errors.hpp"
#include "modecast/rng.hpp"
#include "modecast/vmd/vmd.hpp"

using namespace modecast;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::vector<double> tone(std::size_t n, double freq, bool cosine = true) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double phase = kTau * freq * static_cast<double>(t);
    v[t] = cosine ? std::cos(phase) : std::sin(phase);
  }
  return v;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Independent oracle: naive DFT power on the non-negative frequency bins.
std::vector<double> dft_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> power(n / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = kTau * static_cast<double>(k) *
                           static_cast<double>(t) / static_cast<double>(n);
      re += x[t] * std::cos(phase);
      im -= x[t] * std::sin(phase);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

// Top spectral peaks, separated by a guard band, as normalized frequencies.
std::vector<double> top_peaks(const std::vector<double>& x, std::size_t count) {
  auto power = dft_power(x);
  const std::size_t n = x.size();
  std::vector<double> peaks;
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t best = static_cast<std::size_t>(
        std::max_element(power.begin(), power.end()) - power.begin());
    peaks.push_back(static_cast<double>(best) / static_cast<double>(n));
    const std::size_t guard = 8;
    const std::size_t lo = best > guard ? best - guard : 0;
    const std::size_t hi = std::min(power.size(), best + guard + 1);
    std::fill(power.begin() + static_cast<std::ptrdiff_t>(lo),
              power.begin() + static_cast<std::ptrdiff_t>(hi), 0.0);
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("constant signal is one zero-frequency mode") {
  const double c = 3.25;
  std::vector<double> signal(256, c);
  vmd::VmdConfig cfg;
  cfg.num_modes = 1;
  const vmd::ModeSet result = vmd::decompose(signal, cfg);
  REQUIRE(result.modes.rows == 1);
  CHECK(result.center_frequencies[0] <= 1e-3);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    CHECK(std::abs(result.modes.at(0, i) - c) <= 1e-6 * std::abs(c));
  }
}

TEST_CASE("single tone recovers the spectral peak") {
  const std::size_t n = 1024;
  const auto signal = tone(n, 0.05, /*cosine=*/false);
  vmd::VmdConfig cfg;
  cfg.num_modes = 1;
  cfg.alpha = 2000.0;
  const vmd::ModeSet result = vmd::decompose(signal, cfg);

  const auto peaks = top_peaks(signal, 1);
  CHECK(std::abs(result.center_frequencies[0] - peaks[0]) < 5e-3);
  CHECK(std::abs(result.center_frequencies[0] - 0.05) < 5e-3);
}

TEST_CASE("two tones separate into two modes") {
  const std::size_t n = 1024;
  const auto signal = add(tone(n, 0.04), tone(n, 0.18));
  vmd::VmdConfig cfg;
  cfg.num_modes = 2;
  cfg.alpha = 2000.0;
  const vmd::ModeSet result = vmd::decompose(signal, cfg);

  const auto peaks = top_peaks(signal, 2);
  REQUIRE(result.center_frequencies.size() == 2);
  CHECK(std::abs(result.center_frequencies[0] - peaks[0]) < 5e-3);
  CHECK(std::abs(result.center_frequencies[1] - peaks[1]) < 5e-3);

  CHECK(correlation(result.modes.row(0), tone(n, 0.04)) >= 0.95);
  CHECK(correlation(result.modes.row(1), tone(n, 0.18)) >= 0.95);

  // energy sanity
  double mode_energy = 0.0, signal_energy = 0.0;
  for (std::size_t m = 0; m < 2; ++m) {
    for (double v : result.modes.row(m)) mode_energy += v * v;
  }
  for (double v : signal) signal_energy += v * v;
  CHECK(mode_energy <= 1.1 * signal_energy);
}

TEST_CASE("exact cover and frequency ordering on random signals") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 64 + rng.below(512);
    std::vector<double> signal(n);
    for (double& v : signal) v = rng.uniform(-3.0, 3.0);
    vmd::VmdConfig cfg;
    cfg.num_modes = 1 + rng.below(4);
    cfg.max_iterations = 50;
    const vmd::ModeSet result = vmd::decompose(signal, cfg);

    const auto rebuilt = vmd::reconstruct(result);
    double max_abs = 0.0, max_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_abs = std::max(max_abs, std::abs(signal[i]));
      max_err = std::max(max_err, std::abs(rebuilt[i] - signal[i]));
    }
    CHECK(max_err <= 1e-12 * max_abs);

    for (std::size_t m = 1; m < result.center_frequencies.size(); ++m) {
      CHECK(result.center_frequencies[m] >= result.center_frequencies[m - 1]);
    }
  }
}

TEST_CASE("mirror symmetry for even-length signals") {
  const std::size_t n = 256;
  Rng rng(5);
  auto signal = add(tone(n, 0.07), tone(n, 0.23));
  for (double& v : signal) v += 0.05 * rng.uniform(-1.0, 1.0);

  std::vector<double> reversed(signal.rbegin(), signal.rend());
  vmd::VmdConfig cfg;
  cfg.num_modes = 2;
  const vmd::ModeSet fwd = vmd::decompose(signal, cfg);
  const vmd::ModeSet bwd = vmd::decompose(reversed, cfg);

  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(fwd.modes.at(m, i) - bwd.modes.at(m, n - 1 - i)) < 1e-6);
    }
  }
}

TEST_CASE("determinism: identical input and config give bit-identical output") {
  const std::size_t n = 300;
  Rng rng(11);
  std::vector<double> signal(n);
  for (double& v : signal) v = rng.uniform(-1.0, 1.0);

  vmd::VmdConfig cfg;
  cfg.num_modes = 3;
  cfg.omega_init = vmd::OmegaInit::random;
  cfg.seed = 1234;
  const vmd::ModeSet a = vmd::decompose(signal, cfg);
  const vmd::ModeSet b = vmd::decompose(signal, cfg);

  CHECK(a.iterations_used == b.iterations_used);
  CHECK(a.converged == b.converged);
  CHECK(a.modes.data == b.modes.data);
  CHECK(a.residual == b.residual);
  CHECK(a.center_frequencies == b.center_frequencies);
}

TEST_CASE("wiener update examples") {
  using cd = std::complex<double>;
  const std::vector<double> freq = {0.0, 0.1, 0.2, 0.3};
  std::vector<cd> f = {{1.0, 0.0}, {2.0, -1.0}, {0.5, 0.5}, {0.0, 3.0}};
  std::vector<cd> zeros(4, cd{0.0, 0.0});

  SUBCASE("denominator is 1 at the center frequency") {
    const auto out = vmd::wiener_mode_update(f, zeros, zeros, freq, 0.1, 2000.0);
    CHECK(out[1].real() == doctest::Approx(2.0));
    CHECK(out[1].imag() == doctest::Approx(-1.0));
  }
  SUBCASE("zero input gives zero output") {
    const auto out = vmd::wiener_mode_update(zeros, zeros, zeros, freq, 0.2, 500.0);
    for (const cd& v : out) {
      CHECK(v.real() == 0.0);
      CHECK(v.imag() == 0.0);
    }
  }
  SUBCASE("single bin at distance 0.1 is attenuated by 41") {
    std::vector<cd> single(4, cd{0.0, 0.0});
    single[2] = {82.0, 41.0};
    const auto out = vmd::wiener_mode_update(single, zeros, zeros, freq, 0.1, 2000.0);
    CHECK(out[2].real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out[2].imag() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("mismatched lengths are a shape error") {
    std::vector<cd> shorter(3, cd{0.0, 0.0});
    CHECK_THROWS_AS((void)vmd::wiener_mode_update(f, shorter, zeros, freq, 0.1, 2000.0),
                    Error);
  }
}

TEST_CASE("center frequency update examples") {
  using cd = std::complex<double>;
  const std::vector<double> freq = {0.0, 0.1, 0.2, 0.3};

  std::vector<cd> single(4, cd{0.0, 0.0});
  single[2] = {3.0, -4.0};
  CHECK(vmd::center_frequency_update(single, freq) == doctest::Approx(0.2));

  std::vector<cd> equal(4, cd{0.0, 0.0});
  equal[1] = {1.0, 0.0};
  equal[3] = {0.0, 1.0};
  CHECK(vmd::center_frequency_update(equal, freq) == doctest::Approx(0.2));

  std::vector<cd> weighted(4, cd{0.0, 0.0});
  weighted[1] = {1.0, 0.0};
  weighted[3] = {2.0, 0.0};
  CHECK(vmd::center_frequency_update(weighted, freq) == doctest::Approx(0.26));

  std::vector<cd> zeros(4, cd{0.0, 0.0});
  try {
    (void)vmd::center_frequency_update(zeros, freq);
    FAIL("expected degenerate_mode");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_mode);
  }
}

TEST_CASE("reconstruct identities") {
  SUBCASE("single mode with zero residual is the signal") {
    vmd::ModeSet one;
    one.modes = Matrix(1, 3);
    one.modes.at(0, 0) = 2.0;
    one.modes.at(0, 1) = -1.0;
    one.modes.at(0, 2) = 0.5;
    one.residual = {0.0, 0.0, 0.0};
    one.center_frequencies = {0.1};
    CHECK(vmd::reconstruct(one) == std::vector<double>{2.0, -1.0, 0.5});
  }

  vmd::ModeSet set;
  set.modes = Matrix(2, 4);
  const std::vector<double> m = {1.0, -2.0, 3.0, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    set.modes.at(0, i) = m[i];
    set.modes.at(1, i) = -m[i];
  }
  set.residual = {0.1, 0.2, 0.3, 0.4};
  set.center_frequencies = {0.1, 0.2};
  const auto out = vmd::reconstruct(set);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out[i] == doctest::Approx(set.residual[i]));
  }
}

TEST_CASE("input validation") {
  vmd::VmdConfig cfg;
  std::vector<double> nan_signal(64, 0.0);
  nan_signal[10] = std::nan("");
  try {
    (void)vmd::decompose(nan_signal, cfg);
    FAIL("expected invalid_signal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_signal);
  }

  std::vector<double> tiny(8, 1.0);
  try {
    (void)vmd::decompose(tiny, cfg);
    FAIL("expected too_short");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::too_short);
  }

  std::vector<double> short_for_modes(20, 1.0);
  vmd::VmdConfig many;
  many.num_modes = 6;
  try {
    (void)vmd::decompose(short_for_modes, many);
    FAIL("expected too_short");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::too_short);
  }
}

TEST_CASE("convergence metadata") {
  const std::size_t n = 512;
  const auto signal = tone(n, 0.1);
  vmd::VmdConfig cfg;
  cfg.num_modes = 1;

  SUBCASE("converged runs set the flag and stop early") {
    const auto result = vmd::decompose(signal, cfg);
    CHECK(result.converged);
    CHECK(result.iterations_used < cfg.max_iterations);
  }
  SUBCASE("hitting the cap is reported, not an error") {
    cfg.max_iterations = 2;
    cfg.tolerance = 1e-16;
    const auto result = vmd::decompose(signal, cfg);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations_used == 2);
  }
}
