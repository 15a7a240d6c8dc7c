#include <cmath>
#include <string>

#include "modecast/errors.hpp"
#include "modecast/pipeline/model_spec.hpp"
#include "modecast/rng.hpp"

namespace modecast::pipeline {

ModelSpec preset(const std::string& name, nn::Variant variant) {
  ModelSpec spec;
  spec.variant = variant;
  struct Row {
    const char* name;
    std::size_t lstm_h, lstm_l;
    std::size_t vmd_h, vmd_l;
    std::size_t cnn_k, cnn_h, cnn_l;
  };
  static constexpr Row rows[] = {
      {"dataset1", 10, 2, 12, 3, 5, 12, 2},
      {"dataset2", 8, 2, 10, 2, 7, 10, 2},
      {"dataset3", 6, 1, 12, 2, 3, 12, 2},
      {"dataset4", 10, 1, 10, 2, 1, 12, 3},
  };
  for (const Row& row : rows) {
    if (name != row.name) continue;
    switch (variant) {
      case nn::Variant::lstm:
        spec.hidden_size = row.lstm_h;
        spec.num_layers = row.lstm_l;
        break;
      case nn::Variant::vmd_lstm:
        spec.hidden_size = row.vmd_h;
        spec.num_layers = row.vmd_l;
        break;
      case nn::Variant::vmd_cnn_lstm:
        spec.num_kernels = row.cnn_k;
        spec.hidden_size = row.cnn_h;
        spec.num_layers = row.cnn_l;
        break;
    }
    return spec;
  }
  fail(ErrorKind::spec, "unknown preset '" + name + "'");
}

nn::Model assemble(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.hidden_size < 1 || spec.num_layers < 1 || spec.seq_len < 1 ||
      spec.modes < 1 ||
      (spec.variant == nn::Variant::vmd_cnn_lstm && spec.num_kernels < 1)) {
    fail(ErrorKind::spec, "assemble: invalid model spec");
  }
  nn::Model model(spec.variant, spec.window_height(), spec.seq_len,
                  spec.num_kernels, spec.hidden_size, spec.num_layers);

  Rng rng(seed);
  for (auto& [name, tensor] : model.named_parameters()) {
    const bool is_bias = name.find("bias") != std::string::npos ||
                         name.find(".b_") != std::string::npos;
    if (is_bias) continue;  // biases start at zero
    // fan-in is the trailing contraction width of the weight tensor
    std::size_t fan_in = 1;
    for (std::size_t d = 1; d < tensor->shape.size(); ++d) {
      fan_in *= tensor->shape[d];
    }
    if (tensor->shape.size() == 1) fan_in = tensor->shape[0];  // head vector
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& w : tensor->data) w = rng.uniform(-bound, bound);
  }
  return model;
}

}  // namespace modecast::pipeline
