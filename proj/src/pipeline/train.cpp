#include "modecast/pipeline/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "modecast/errors.hpp"
#include "modecast/nn/adam.hpp"
#include "modecast/rng.hpp"

namespace modecast::pipeline {

TrainResult train(nn::Model& model, const WindowedDataset& data,
                  const TrainConfig& config) {
  if (data.num_samples == 0) {
    fail(ErrorKind::empty_batch, "train: empty dataset");
  }
  if (config.batch_size < 1) fail(ErrorKind::spec, "train: batch size must be >= 1");
  if (data.height != model.window_height() || data.length != model.seq_len()) {
    fail(ErrorKind::shape, "train: dataset windows do not match the model");
  }

  TrainResult result;
  nn::Adam optimizer(model.parameters());
  Rng rng(config.seed);

  std::vector<std::size_t> order(data.num_samples);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = nn::lr_at(epoch, config.schedule);
    rng.shuffle(order);

    double epoch_sq_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t count =
          std::min(config.batch_size, order.size() - start);
      model.zero_grads();
      const double grad_scale = 2.0 / static_cast<double>(count);
      double batch_sq = 0.0;
      for (std::size_t b = 0; b < count; ++b) {
        const std::size_t idx = order[start + b];
        const double prediction = model.predict(data.sample(idx));
        const double err = prediction - data.targets[idx];
        batch_sq += err * err;
        model.backward(grad_scale * err);
      }
      if (!std::isfinite(batch_sq)) {
        fail(ErrorKind::training_diverged,
             "train: loss diverged at epoch " + std::to_string(epoch));
      }
      epoch_sq_sum += batch_sq;
      optimizer.step(lr);
    }

    result.curve.push_back(
        {epoch, lr, epoch_sq_sum / static_cast<double>(data.num_samples)});
  }
  return result;
}

}  // namespace modecast::pipeline
