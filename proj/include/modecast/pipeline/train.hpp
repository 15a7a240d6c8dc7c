#pragma once

#include <cstddef>
#include <vector>

#include "modecast/nn/model.hpp"
#include "modecast/pipeline/model_spec.hpp"
#include "modecast/pipeline/windows.hpp"

namespace modecast::pipeline {

struct CurvePoint {
  std::size_t epoch;
  double lr;
  double train_mse;
};

struct TrainResult {
  std::vector<CurvePoint> curve;

  double final_train_mse() const {
    return curve.empty() ? std::numeric_limits<double>::quiet_NaN()
                         : curve.back().train_mse;
  }
};

/// Mini-batch Adam training with a seeded shuffle each epoch and the cosine
/// restart schedule evaluated per epoch. The trailing short batch is kept.
/// Deterministic in (model initialization, dataset, config).
TrainResult train(nn::Model& model, const WindowedDataset& data,
                  const TrainConfig& config);

}  // namespace modecast::pipeline
