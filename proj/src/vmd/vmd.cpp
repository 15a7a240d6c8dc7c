#include "modecast/vmd/vmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modecast/errors.hpp"
#include "modecast/kernels/kernels.hpp"
#include "modecast/rng.hpp"
#include "modecast/vmd/spectrum.hpp"

namespace modecast::vmd {

namespace {

using Spectrum = std::vector<std::complex<double>>;

double* flat(Spectrum& s) { return reinterpret_cast<double*>(s.data()); }

// Mirror extension: reflect the first half on the left and the second half
// on the right, giving a 2N buffer with the original embedded at [h, h+N).
std::vector<double> mirror_extend(std::span<const double> f, std::size_t* offset) {
  const std::size_t n = f.size();
  const std::size_t h = n / 2;
  std::vector<double> ext(2 * n);
  for (std::size_t i = 0; i < h; ++i) ext[i] = f[h - 1 - i];
  for (std::size_t i = 0; i < n; ++i) ext[h + i] = f[i];
  for (std::size_t i = 0; i < n - h; ++i) ext[h + n + i] = f[n - 1 - i];
  *offset = h;
  return ext;
}

std::vector<double> initial_omegas(const VmdConfig& cfg) {
  const std::size_t k = cfg.num_modes;
  std::vector<double> omega(k, 0.0);
  switch (cfg.omega_init) {
    case OmegaInit::zero:
      break;
    case OmegaInit::uniform:
      for (std::size_t i = 0; i < k; ++i) {
        omega[i] = static_cast<double>(i) / (2.0 * static_cast<double>(k));
      }
      break;
    case OmegaInit::random: {
      Rng rng(cfg.seed);
      for (std::size_t i = 0; i < k; ++i) omega[i] = rng.uniform(0.0, 0.5);
      std::sort(omega.begin(), omega.end());
      break;
    }
  }
  return omega;
}

void validate(std::span<const double> signal, const VmdConfig& cfg) {
  if (cfg.num_modes < 1 || cfg.alpha <= 0.0 || cfg.tolerance <= 0.0 ||
      cfg.max_iterations < 1 || cfg.tau < 0.0) {
    fail(ErrorKind::spec, "vmd: invalid configuration");
  }
  if (signal.size() < 16) {
    fail(ErrorKind::too_short,
         "vmd: signal too short (" + std::to_string(signal.size()) +
             " samples, need >= 16)");
  }
  if (signal.size() < 4 * cfg.num_modes) {
    fail(ErrorKind::too_short,
         "vmd: signal too short for " + std::to_string(cfg.num_modes) +
             " modes (need >= 4 samples per mode)");
  }
  for (double v : signal) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::invalid_signal, "vmd: signal contains non-finite values");
    }
  }
}

}  // namespace

OmegaInit omega_init_from_string(const std::string& s) {
  if (s == "uniform") return OmegaInit::uniform;
  if (s == "zero") return OmegaInit::zero;
  if (s == "random") return OmegaInit::random;
  fail(ErrorKind::spec, "vmd: unknown omega init '" + s + "'");
}

const char* to_string(OmegaInit init) {
  switch (init) {
    case OmegaInit::uniform:
      return "uniform";
    case OmegaInit::zero:
      return "zero";
    case OmegaInit::random:
      return "random";
  }
  return "unknown";
}

std::vector<std::complex<double>> wiener_mode_update(
    std::span<const std::complex<double>> spectrum_f,
    std::span<const std::complex<double>> other_modes_sum,
    std::span<const std::complex<double>> lambda_hat,
    std::span<const double> freq_grid, double omega_k, double alpha) {
  const std::size_t n = spectrum_f.size();
  if (other_modes_sum.size() != n || lambda_hat.size() != n ||
      freq_grid.size() != n) {
    fail(ErrorKind::shape, "vmd: wiener update arrays differ in length");
  }
  if (alpha <= 0.0) fail(ErrorKind::spec, "vmd: alpha must be positive");
  Spectrum zero(n, {0.0, 0.0});
  Spectrum out(n);
  kernels::active().wiener_filter(
      reinterpret_cast<const double*>(spectrum_f.data()),
      reinterpret_cast<const double*>(other_modes_sum.data()), flat(zero),
      reinterpret_cast<const double*>(lambda_hat.data()), freq_grid.data(),
      omega_k, alpha, flat(out), n);
  return out;
}

double center_frequency_update(
    std::span<const std::complex<double>> mode_spectrum,
    std::span<const double> freq_grid) {
  if (mode_spectrum.size() != freq_grid.size()) {
    fail(ErrorKind::shape, "vmd: spectrum/grid length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  kernels::active().spectral_moments(
      reinterpret_cast<const double*>(mode_spectrum.data()), freq_grid.data(),
      mode_spectrum.size(), &num, &den);
  if (den <= 0.0) {
    fail(ErrorKind::degenerate_mode,
         "vmd: center frequency of an all-zero spectrum is undefined");
  }
  return num / den;
}

ModeSet decompose(std::span<const double> signal, const VmdConfig& config) {
  validate(signal, config);
  const auto& k = kernels::active();
  const std::size_t n = signal.size();
  const std::size_t num_modes = config.num_modes;

  std::size_t offset = 0;
  const std::vector<double> extended = mirror_extend(signal, &offset);
  const std::size_t ext_len = extended.size();

  RealFft fft(ext_len);
  const std::size_t nb = fft.bins();
  const std::vector<double> freq = fft.frequency_grid();

  Spectrum f_hat(nb);
  fft.forward(extended, f_hat);

  std::vector<Spectrum> mode_hat(num_modes, Spectrum(nb, {0.0, 0.0}));
  Spectrum sum_modes(nb, {0.0, 0.0});
  Spectrum lambda(nb, {0.0, 0.0});
  Spectrum scratch(nb);
  std::vector<double> omega = initial_omegas(config);

  const double eps = std::numeric_limits<double>::epsilon();
  const double inv_m = 1.0 / static_cast<double>(ext_len);

  bool converged = false;
  std::size_t iterations = 0;
  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    double metric = 0.0;
    for (std::size_t m = 0; m < num_modes; ++m) {
      Spectrum& old = mode_hat[m];
      k.wiener_filter(flat(f_hat), flat(sum_modes), flat(old), flat(lambda),
                      freq.data(), omega[m], config.alpha, flat(scratch), nb);

      double diff_plain = 0.0;
      double ref_plain = 0.0;
      k.complex_diff_energy(flat(scratch), flat(old), nb, &diff_plain,
                            &ref_plain);
      // Parseval weights over the half spectrum: interior bins twice, DC
      // and Nyquist once, so the ratio equals the time-domain one
      const double diff_w = 2.0 * diff_plain - std::norm(scratch[0] - old[0]) -
                            std::norm(scratch[nb - 1] - old[nb - 1]);
      const double ref_w =
          2.0 * ref_plain - std::norm(old[0]) - std::norm(old[nb - 1]);
      metric += (diff_w * inv_m) / (ref_w * inv_m + eps);

      k.accumulate_replace(flat(sum_modes), flat(scratch), flat(old), 2 * nb);
      std::swap(old, scratch);

      double num = 0.0;
      double den = 0.0;
      k.spectral_moments(flat(mode_hat[m]), freq.data(), nb, &num, &den);
      if (den > 0.0) omega[m] = num / den;
    }
    if (config.tau != 0.0) {
      k.dual_ascent(flat(lambda), flat(f_hat), flat(sum_modes), config.tau,
                    2 * nb);
    }
    iterations = iter;
    if (metric < config.tolerance) {
      converged = true;
      break;
    }
  }

  // Back to the time domain, cropped to the original support, sorted by
  // ascending center frequency.
  std::vector<std::size_t> order(num_modes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

  ModeSet result;
  result.modes = Matrix(num_modes, n);
  result.center_frequencies.resize(num_modes);
  std::vector<double> time_domain(ext_len);
  for (std::size_t rank = 0; rank < num_modes; ++rank) {
    const std::size_t src = order[rank];
    fft.inverse(mode_hat[src], time_domain);
    for (std::size_t i = 0; i < n; ++i) {
      result.modes.at(rank, i) = time_domain[offset + i];
    }
    result.center_frequencies[rank] = omega[src];
  }

  result.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mode_sum = 0.0;
    for (std::size_t m = 0; m < num_modes; ++m) mode_sum += result.modes.at(m, i);
    result.residual[i] = signal[i] - mode_sum;
  }
  result.iterations_used = iterations;
  result.converged = converged;
  return result;
}

std::vector<double> reconstruct(const ModeSet& modes) {
  const std::size_t n = modes.residual.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < modes.modes.rows; ++m) {
    const auto row = modes.modes.row(m);
    for (std::size_t i = 0; i < n; ++i) out[i] += row[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] += modes.residual[i];
  return out;
}

}  // namespace modecast::vmd
