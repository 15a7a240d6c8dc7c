#include "modecast/io/checkpoint.hpp"

#include <sstream>

#include "modecast/errors.hpp"
#include "modecast/io/kv.hpp"

namespace modecast::io {

namespace {

constexpr const char* kMagic = "modecast checkpoint v1";

std::string shape_to_string(const std::vector<std::size_t>& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += 'x';
    out += std::to_string(shape[i]);
  }
  return out;
}

std::vector<std::size_t> shape_from_string(const std::string& s) {
  std::vector<std::size_t> shape;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, 'x')) {
    try {
      shape.push_back(std::stoul(part));
    } catch (const std::exception&) {
      fail(ErrorKind::corrupt_checkpoint, "checkpoint: bad shape '" + s + "'");
    }
  }
  if (shape.empty()) {
    fail(ErrorKind::corrupt_checkpoint, "checkpoint: bad shape '" + s + "'");
  }
  return shape;
}

}  // namespace

Checkpoint make_checkpoint(nn::Model& model, const pipeline::ModelSpec& spec,
                           const pipeline::Scaler& scaler,
                           const vmd::VmdConfig& vmd_config,
                           std::uint64_t seed, std::uint64_t epochs,
                           double final_loss) {
  Checkpoint ckpt;
  ckpt.spec = spec;
  ckpt.scaler = scaler;
  ckpt.vmd_config = vmd_config;
  ckpt.seed = seed;
  ckpt.epochs = epochs;
  ckpt.final_loss = final_loss;
  for (auto& [name, tensor] : model.named_parameters()) {
    ckpt.params.push_back({name, tensor->shape, tensor->data});
  }
  return ckpt;
}

nn::Model restore_model(const Checkpoint& ckpt) {
  nn::Model model = [&] {
    try {
      return nn::Model(ckpt.spec.variant, ckpt.spec.window_height(),
                       ckpt.spec.seq_len, ckpt.spec.num_kernels,
                       ckpt.spec.hidden_size, ckpt.spec.num_layers);
    } catch (const Error& e) {
      fail(ErrorKind::incompatible_checkpoint,
           std::string("checkpoint: stored spec is unusable: ") + e.what());
    }
  }();
  auto named = model.named_parameters();
  if (named.size() != ckpt.params.size()) {
    fail(ErrorKind::incompatible_checkpoint,
         "checkpoint: parameter blocks do not match the stored spec");
  }
  for (std::size_t i = 0; i < named.size(); ++i) {
    const ParamBlock& block = ckpt.params[i];
    auto& [name, tensor] = named[i];
    if (block.name != name || block.shape != tensor->shape ||
        block.values.size() != tensor->data.size()) {
      fail(ErrorKind::incompatible_checkpoint,
           "checkpoint: block '" + block.name + "' does not fit '" + name + "'");
    }
    tensor->data = block.values;
  }
  return model;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::string out = std::string(kMagic) + '\n';

  KvFile model_kv;
  model_kv.set("variant", std::string(nn::to_string(ckpt.spec.variant)));
  model_kv.set("num_kernels", std::uint64_t{ckpt.spec.num_kernels});
  model_kv.set("hidden_size", std::uint64_t{ckpt.spec.hidden_size});
  model_kv.set("num_layers", std::uint64_t{ckpt.spec.num_layers});
  model_kv.set("seq_len", std::uint64_t{ckpt.spec.seq_len});
  model_kv.set("modes", std::uint64_t{ckpt.spec.modes});
  out += "[model]\n" + model_kv.serialize();

  KvFile scaler_kv;
  scaler_kv.set("min", double_to_hex(ckpt.scaler.min));
  scaler_kv.set("max", double_to_hex(ckpt.scaler.max));
  out += "[scaler]\n" + scaler_kv.serialize();

  KvFile vmd_kv;
  vmd_kv.set("num_modes", std::uint64_t{ckpt.vmd_config.num_modes});
  vmd_kv.set("alpha", double_to_hex(ckpt.vmd_config.alpha));
  vmd_kv.set("tau", double_to_hex(ckpt.vmd_config.tau));
  vmd_kv.set("tolerance", double_to_hex(ckpt.vmd_config.tolerance));
  vmd_kv.set("max_iterations", std::uint64_t{ckpt.vmd_config.max_iterations});
  vmd_kv.set("omega_init", std::string(vmd::to_string(ckpt.vmd_config.omega_init)));
  vmd_kv.set("seed", std::uint64_t{ckpt.vmd_config.seed});
  out += "[vmd]\n" + vmd_kv.serialize();

  KvFile train_kv;
  train_kv.set("seed", ckpt.seed);
  train_kv.set("epochs", ckpt.epochs);
  train_kv.set("final_loss", double_to_hex(ckpt.final_loss));
  out += "[training]\n" + train_kv.serialize();

  for (const ParamBlock& block : ckpt.params) {
    out += "[param " + block.name + ' ' + shape_to_string(block.shape) + "]\n";
    for (std::size_t i = 0; i < block.values.size(); ++i) {
      out += double_to_hex(block.values[i]);
      out += (i % 4 == 3 || i + 1 == block.values.size()) ? '\n' : ' ';
    }
  }
  out += "[end]\n";
  write_file(path, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;

  if (!std::getline(in, line)) {
    fail(ErrorKind::corrupt_checkpoint, path.string() + ": empty file");
  }
  if (line != kMagic) {
    fail(ErrorKind::incompatible_checkpoint,
         path.string() + ": unsupported version header '" + line + "'");
  }

  // read section bodies keyed by their header line
  Checkpoint ckpt;
  bool saw_end = false;
  std::string section;
  std::string body;
  KvFile model_kv, scaler_kv, vmd_kv, train_kv;
  bool have_model = false, have_scaler = false, have_vmd = false,
       have_training = false;

  auto flush_section = [&]() {
    if (section.empty()) return;
    if (section == "model") {
      model_kv = KvFile::parse_text(body);
      have_model = true;
    } else if (section == "scaler") {
      scaler_kv = KvFile::parse_text(body);
      have_scaler = true;
    } else if (section == "vmd") {
      vmd_kv = KvFile::parse_text(body);
      have_vmd = true;
    } else if (section == "training") {
      train_kv = KvFile::parse_text(body);
      have_training = true;
    } else if (section.rfind("param ", 0) == 0) {
      std::istringstream head(section);
      std::string tag, name, shape_str;
      head >> tag >> name >> shape_str;
      if (name.empty() || shape_str.empty()) {
        fail(ErrorKind::corrupt_checkpoint,
             path.string() + ": bad param header '" + section + "'");
      }
      ParamBlock block;
      block.name = name;
      block.shape = shape_from_string(shape_str);
      std::istringstream values(body);
      std::string token;
      while (values >> token) block.values.push_back(double_from_hex(token));
      const std::size_t expected = nn::shape_product(block.shape);
      if (block.values.size() != expected) {
        fail(ErrorKind::corrupt_checkpoint,
             path.string() + ": param '" + name + "' holds " +
                 std::to_string(block.values.size()) + " values, expected " +
                 std::to_string(expected));
      }
      ckpt.params.push_back(std::move(block));
    } else {
      fail(ErrorKind::corrupt_checkpoint,
           path.string() + ": unknown section '" + section + "'");
    }
    section.clear();
    body.clear();
  };

  try {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() == '[' && line.back() == ']') {
        flush_section();
        const std::string name = line.substr(1, line.size() - 2);
        if (name == "end") {
          saw_end = true;
          break;
        }
        section = name;
      } else {
        body += line + '\n';
      }
    }
    flush_section();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::parse) throw;
    fail(ErrorKind::corrupt_checkpoint, path.string() + ": " + e.what());
  }
  if (!saw_end) {
    fail(ErrorKind::corrupt_checkpoint, path.string() + ": truncated file");
  }
  if (!have_model || !have_scaler || !have_vmd || !have_training) {
    fail(ErrorKind::corrupt_checkpoint, path.string() + ": missing sections");
  }

  try {
    ckpt.spec.variant = nn::variant_from_string(model_kv.require("variant"));
    ckpt.spec.num_kernels = model_kv.require_uint("num_kernels");
    ckpt.spec.hidden_size = model_kv.require_uint("hidden_size");
    ckpt.spec.num_layers = model_kv.require_uint("num_layers");
    ckpt.spec.seq_len = model_kv.require_uint("seq_len");
    ckpt.spec.modes = model_kv.require_uint("modes");
    ckpt.scaler.min = double_from_hex(scaler_kv.require("min"));
    ckpt.scaler.max = double_from_hex(scaler_kv.require("max"));
    ckpt.vmd_config.num_modes = vmd_kv.require_uint("num_modes");
    ckpt.vmd_config.alpha = double_from_hex(vmd_kv.require("alpha"));
    ckpt.vmd_config.tau = double_from_hex(vmd_kv.require("tau"));
    ckpt.vmd_config.tolerance = double_from_hex(vmd_kv.require("tolerance"));
    ckpt.vmd_config.max_iterations = vmd_kv.require_uint("max_iterations");
    ckpt.vmd_config.omega_init =
        vmd::omega_init_from_string(vmd_kv.require("omega_init"));
    ckpt.vmd_config.seed = vmd_kv.require_uint("seed");
    ckpt.seed = train_kv.require_uint("seed");
    ckpt.epochs = train_kv.require_uint("epochs");
    ckpt.final_loss = double_from_hex(train_kv.require("final_loss"));
  } catch (const Error& e) {
    fail(ErrorKind::corrupt_checkpoint, path.string() + ": " + e.what());
  }
  return ckpt;
}

}  // namespace modecast::io
