#include "modecast/eval/dm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "modecast/errors.hpp"

namespace modecast::eval {

namespace {

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cont_fraction(double a, double b, double x) {
  constexpr double eps = 1e-15;
  constexpr double fpmin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double reg_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for Student-t with nu degrees of freedom.
double student_t_two_tail(double t, double nu) {
  const double x = nu / (nu + t * t);
  return reg_incomplete_beta(0.5 * nu, 0.5, x);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double dm_p_two_sided(double statistic, std::size_t n) {
  return student_t_two_tail(statistic, static_cast<double>(n - 1));
}

double dm_p_one_sided_less(double statistic, std::size_t n) {
  const double half = 0.5 * student_t_two_tail(statistic, static_cast<double>(n - 1));
  return statistic <= 0.0 ? half : 1.0 - half;
}

DmResult dm_test(std::span<const double> errors_a,
                 std::span<const double> errors_b) {
  if (errors_a.size() != errors_b.size()) {
    fail(ErrorKind::shape, "dm: error sequences differ in length");
  }
  const std::size_t n = errors_a.size();
  if (n < 10) fail(ErrorKind::spec, "dm: need at least 10 observations");

  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = errors_a[i] * errors_a[i] - errors_b[i] * errors_b[i];
    mean += d[i];
  }
  mean /= static_cast<double>(n);

  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  if (var <= 0.0) {
    fail(ErrorKind::zero_variance,
         "dm: loss differentials have zero variance, statistic undefined");
  }

  DmResult result;
  result.n = n;
  result.statistic = mean / std::sqrt(var / static_cast<double>(n));
  result.p_two_sided = dm_p_two_sided(result.statistic, n);
  result.p_one_sided_less = dm_p_one_sided_less(result.statistic, n);
  return result;
}

}  // namespace modecast::eval
