#include "modecast/pipeline/grid_search.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "modecast/errors.hpp"

namespace modecast::pipeline {

namespace {

double validation_rmse(nn::Model& model, const WindowedDataset& val) {
  double sq = 0.0;
  for (std::size_t s = 0; s < val.num_samples; ++s) {
    const double err = model.predict_const(val.sample(s)) - val.targets[s];
    sq += err * err;
  }
  return std::sqrt(sq / static_cast<double>(val.num_samples));
}

}  // namespace

GridSearchResult grid_search(nn::Variant variant,
                             const WindowedDataset& in_sample,
                             const GridSpec& grids, const TrainConfig& config,
                             std::size_t modes, std::size_t seq_len,
                             const GridSearchOptions& options) {
  if (grids.hidden_sizes.empty() || grids.num_layers.empty() ||
      (variant == nn::Variant::vmd_cnn_lstm && grids.num_kernels.empty())) {
    fail(ErrorKind::spec, "gridsearch: empty grid");
  }
  if (config.validation_fraction <= 0.0 || config.validation_fraction >= 1.0) {
    fail(ErrorKind::spec, "gridsearch: validation fraction must be in (0, 1)");
  }

  // enumeration order fixes the per-job seeds
  std::vector<ModelSpec> candidates;
  const std::vector<std::size_t> kernel_axis =
      variant == nn::Variant::vmd_cnn_lstm ? grids.num_kernels
                                           : std::vector<std::size_t>{1};
  for (std::size_t nk : kernel_axis) {
    for (std::size_t nh : grids.hidden_sizes) {
      for (std::size_t nl : grids.num_layers) {
        ModelSpec spec;
        spec.variant = variant;
        spec.num_kernels = nk;
        spec.hidden_size = nh;
        spec.num_layers = nl;
        spec.seq_len = seq_len;
        spec.modes = modes;
        candidates.push_back(spec);
      }
    }
  }

  const std::size_t val_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(
             config.validation_fraction *
             static_cast<double>(in_sample.num_samples))));
  if (val_count >= in_sample.num_samples) {
    fail(ErrorKind::too_short, "gridsearch: not enough windows to hold out");
  }
  const std::size_t fit_count = in_sample.num_samples - val_count;
  const WindowedDataset fit_set = in_sample.subset(0, fit_count);
  const WindowedDataset val_set = in_sample.subset(fit_count, val_count);

  std::vector<GridScore> table(candidates.size());
  auto run_job = [&](std::size_t job) {
    const ModelSpec& spec = candidates[job];
    TrainConfig job_config = config;
    job_config.seed = config.seed + job;
    nn::Model model = assemble(spec, job_config.seed);
    if (options.init_hook) options.init_hook(spec, model);
    train(model, fit_set, job_config);
    table[job] = {spec, job_config.seed, validation_rmse(model, val_set)};
  };

  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t j = 0; j < candidates.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < candidates.size();
             j = next.fetch_add(1)) {
          run_job(j);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  std::size_t best_job = 0;
  auto rank = [&](std::size_t j) {
    const GridScore& s = table[j];
    return std::make_tuple(s.validation_rmse, s.spec.num_layers,
                           s.spec.hidden_size, s.spec.num_kernels);
  };
  for (std::size_t j = 1; j < table.size(); ++j) {
    if (rank(j) < rank(best_job)) best_job = j;
  }

  GridSearchResult result;
  result.best = table[best_job].spec;
  result.table = std::move(table);

  TrainConfig final_config = config;
  final_config.seed = config.seed + best_job;
  result.best_seed = final_config.seed;
  result.best_model = assemble(result.best, final_config.seed);
  if (options.init_hook) options.init_hook(result.best, result.best_model);
  result.best_training = train(result.best_model, in_sample, final_config);
  return result;
}

}  // namespace modecast::pipeline
