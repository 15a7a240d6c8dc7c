#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modecast/matrix.hpp"

namespace modecast::vmd {

enum class OmegaInit { uniform, zero, random };

OmegaInit omega_init_from_string(const std::string& s);
const char* to_string(OmegaInit init);

struct VmdConfig {
  std::size_t num_modes = 4;
  double alpha = 2000.0;        // bandwidth penalty
  double tau = 0.0;             // dual-ascent step; 0 freezes the multiplier
  double tolerance = 1e-7;      // relative convergence threshold
  std::size_t max_iterations = 500;
  OmegaInit omega_init = OmegaInit::uniform;
  std::uint64_t seed = 0;       // used only by OmegaInit::random
};

/// Result of a decomposition: K band-limited modes (rows), their center
/// frequencies in [0, 0.5] cycles/sample sorted ascending, and the residual
/// defined as input minus the mode sum (so the cover is exact by
/// construction).
struct ModeSet {
  Matrix modes;  // K x N
  std::vector<double> center_frequencies;
  std::vector<double> residual;
  std::size_t iterations_used = 0;
  bool converged = false;
};

ModeSet decompose(std::span<const double> signal, const VmdConfig& config);

/// One band update on the non-negative frequency grid:
/// out_i = (f_i - other_i + lambda_i/2) / (1 + 2 alpha (freq_i - omega_k)^2).
std::vector<std::complex<double>> wiener_mode_update(
    std::span<const std::complex<double>> spectrum_f,
    std::span<const std::complex<double>> other_modes_sum,
    std::span<const std::complex<double>> lambda_hat,
    std::span<const double> freq_grid, double omega_k, double alpha);

/// Power-weighted mean frequency of a half spectrum.
double center_frequency_update(
    std::span<const std::complex<double>> mode_spectrum,
    std::span<const double> freq_grid);

/// Element-wise sum of all modes plus residual.
std::vector<double> reconstruct(const ModeSet& modes);

}  // namespace modecast::vmd
