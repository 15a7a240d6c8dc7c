#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "modecast/nn/model.hpp"
#include "modecast/pipeline/model_spec.hpp"
#include "modecast/pipeline/scaler.hpp"
#include "modecast/vmd/vmd.hpp"

namespace modecast::io {

struct ParamBlock {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

/// Self-describing model snapshot: architecture, normalization,
/// decomposition settings, all parameters, and training metadata. The file
/// encoding preserves every double bit-exactly (hexadecimal floats), so
/// save -> load -> save is byte-identical.
struct Checkpoint {
  pipeline::ModelSpec spec;
  pipeline::Scaler scaler;
  vmd::VmdConfig vmd_config;
  std::vector<ParamBlock> params;
  std::uint64_t seed = 0;
  std::uint64_t epochs = 0;
  double final_loss = 0.0;
};

Checkpoint make_checkpoint(nn::Model& model, const pipeline::ModelSpec& spec,
                           const pipeline::Scaler& scaler,
                           const vmd::VmdConfig& vmd_config,
                           std::uint64_t seed, std::uint64_t epochs,
                           double final_loss);

/// Rebuilds the network from the stored spec and parameter blocks.
nn::Model restore_model(const Checkpoint& ckpt);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace modecast::io
