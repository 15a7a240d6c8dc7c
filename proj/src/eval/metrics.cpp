#include "modecast/eval/metrics.hpp"

#include <cmath>

#include "modecast/errors.hpp"

namespace modecast::eval {

MetricReport compute_metrics(std::span<const double> actuals,
                             std::span<const double> predictions) {
  if (actuals.size() != predictions.size()) {
    fail(ErrorKind::shape, "metrics: actual/prediction length mismatch");
  }
  if (actuals.empty()) fail(ErrorKind::empty_batch, "metrics: empty input");

  const double count = static_cast<double>(actuals.size());
  double sq_sum = 0.0;
  double abs_sum = 0.0;
  double pct_sum = 0.0;
  bool mape_defined = true;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double err = actuals[i] - predictions[i];
    sq_sum += err * err;
    abs_sum += std::abs(err);
    if (actuals[i] == 0.0) {
      mape_defined = false;
    } else if (mape_defined) {
      pct_sum += std::abs(err / actuals[i]);
    }
  }

  MetricReport report;
  report.n = actuals.size();
  report.rmse = std::sqrt(sq_sum / count);
  // mean form; some write-ups print the absolute-error sum without 1/T, but
  // the reported magnitudes are only consistent with the mean
  report.mae = abs_sum / count;
  if (mape_defined) report.mape_percent = pct_sum / count * 100.0;
  return report;
}

}  // namespace modecast::eval
