#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "modecast/nn/model.hpp"
#include "modecast/pipeline/model_spec.hpp"
#include "modecast/pipeline/train.hpp"
#include "modecast/pipeline/windows.hpp"

namespace modecast::pipeline {

/// Candidate hyper-parameter values. num_kernels is only enumerated for the
/// vmd_cnn_lstm variant.
struct GridSpec {
  std::vector<std::size_t> num_kernels{1, 3, 5, 7};
  std::vector<std::size_t> hidden_sizes{6, 8, 10, 12};
  std::vector<std::size_t> num_layers{1, 2, 3};
};

struct GridScore {
  ModelSpec spec;
  std::uint64_t seed;         // per-job seed actually used
  double validation_rmse;     // normalized units
};

struct GridSearchResult {
  ModelSpec best;
  std::uint64_t best_seed = 0;   // derived seed the winning retrain used
  std::vector<GridScore> table;  // one row per combination, enumeration order
  nn::Model best_model;          // retrained on the full in-sample windows
  TrainResult best_training;
};

struct GridSearchOptions {
  std::size_t jobs = 1;
  /// Optional warm start: invoked after assemble() for each candidate; may
  /// overwrite the freshly initialized parameters.
  std::function<void(const ModelSpec&, nn::Model&)> init_hook;
};

/// Trains every grid combination on the leading (1 - validation_fraction)
/// share of the given in-sample windows, scores RMSE on the trailing share,
/// picks the minimizer (ties: fewer layers, then smaller hidden size, then
/// fewer kernels) and retrains it on all in-sample windows. Job k uses seed
/// config.seed + k; results are independent of the degree of parallelism.
GridSearchResult grid_search(nn::Variant variant,
                             const WindowedDataset& in_sample,
                             const GridSpec& grids, const TrainConfig& config,
                             std::size_t modes, std::size_t seq_len,
                             const GridSearchOptions& options = {});

}  // namespace modecast::pipeline
