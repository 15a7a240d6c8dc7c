#pragma once

#include <cstddef>
#include <span>

namespace modecast::eval {

/// Comparison of two forecast error sequences under squared loss at horizon
/// one. A negative statistic means the first sequence is more accurate.
struct DmResult {
  double statistic = 0.0;
  double p_two_sided = 1.0;
  double p_one_sided_less = 0.5;
  std::size_t n = 0;
};

/// d_t = e_a^2 - e_b^2; statistic = mean(d) / sqrt(var(d)/T) with the lag-0
/// long-run variance (sample variance, denominator T-1). p-values come from
/// the Student-t distribution with T-1 degrees of freedom, which is the
/// finite-sample reference the published comparison tables use; it converges
/// to the normal mapping as T grows.
DmResult dm_test(std::span<const double> errors_a,
                 std::span<const double> errors_b);

/// p-value mappings used by dm_test, exposed for direct checks.
double dm_p_two_sided(double statistic, std::size_t n);
double dm_p_one_sided_less(double statistic, std::size_t n);

/// Standard normal CDF (the large-sample limit of the mappings above).
double normal_cdf(double x);

}  // namespace modecast::eval
