#include "modecast/cli/app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "modecast/errors.hpp"
#include "modecast/eval/metrics.hpp"
#include "modecast/eval/report.hpp"
#include "modecast/io/checkpoint.hpp"
#include "modecast/io/csv.hpp"
#include "modecast/io/kv.hpp"
#include "modecast/io/synthetic.hpp"
#include "modecast/kernels/kernels.hpp"
#include "modecast/pipeline/forecast.hpp"
#include "modecast/pipeline/grid_search.hpp"
#include "modecast/pipeline/model_spec.hpp"
#include "modecast/pipeline/train.hpp"
#include "modecast/vmd/vmd.hpp"

namespace modecast::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape:
    case ErrorKind::spec:
    case ErrorKind::state:
    case ErrorKind::empty_batch:
      return 1;
    case ErrorKind::io:
    case ErrorKind::parse:
    case ErrorKind::empty_series:
    case ErrorKind::invalid_signal:
    case ErrorKind::too_short:
    case ErrorKind::incompatible_checkpoint:
    case ErrorKind::corrupt_checkpoint:
      return 2;
    case ErrorKind::training_diverged:
    case ErrorKind::degenerate_mode:
    case ErrorKind::degenerate_scale:
    case ErrorKind::zero_variance:
      return 3;
  }
  return 1;
}

/// Relative output paths resolve under MODECAST_OUT_DIR when it is set.
fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("MODECAST_OUT_DIR")) {
      return fs::path(dir) / p;
    }
  }
  return p;
}

// flag > config file > default: each bindable key remembers its CLI option
// so explicit flags win over config values.
class ConfigKeys {
 public:
  void bind(const std::string& key, CLI::Option* opt,
            std::function<void(const std::string&)> set) {
    entries_.push_back({key, opt, std::move(set)});
  }

  void apply(const io::KvFile& kv) const {
    for (const auto& [key, value] : kv.entries()) {
      const Entry* entry = nullptr;
      for (const auto& e : entries_) {
        if (e.key == key) {
          entry = &e;
          break;
        }
      }
      if (entry == nullptr) {
        fail(ErrorKind::spec, "config: unknown key '" + key + "'");
      }
      if (entry->option != nullptr && entry->option->count() > 0) continue;
      entry->set(value);
    }
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const std::string&)> set;
  };
  std::vector<Entry> entries_;
};

std::uint64_t config_uint(const std::string& key, const std::string& value) {
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    fail(ErrorKind::spec, "config: key '" + key + "' is not an integer: '" + value + "'");
  }
}

double config_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    fail(ErrorKind::spec, "config: key '" + key + "' is not a number: '" + value + "'");
  }
}

bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(ErrorKind::spec, "config: key '" + key + "' is not a boolean: '" + value + "'");
}

void print_config(const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
  std::cout << "# resolved configuration (" << command << ")\n";
  for (const auto& [k, v] : kv) std::cout << k << " = " << v << '\n';
  std::cout << "kernels = " << kernels::backend_name(kernels::active_backend())
            << '\n';
}

// ---- shared option groups ----------------------------------------------

struct SeriesOptions {
  std::string input;
  std::string value_column = "value";
  bool skip_missing = true;

  void attach(CLI::App* cmd, ConfigKeys* keys = nullptr, bool required = true) {
    auto* in = cmd->add_option("--input", input, "Input series CSV");
    if (required && keys == nullptr) in->required();
    auto* col = cmd->add_option("--value-column", value_column,
                                "Value column (header name or 0-based index)")
                    ->capture_default_str();
    auto* skip = cmd->add_option("--skip-missing", skip_missing,
                                 "Drop rows with missing/unparseable values")
                     ->capture_default_str();
    if (keys != nullptr) {
      keys->bind("input", in, [this](const std::string& v) { input = v; });
      keys->bind("value_column", col, [this](const std::string& v) { value_column = v; });
      keys->bind("skip_missing", skip,
                 [this](const std::string& v) { skip_missing = config_bool("skip_missing", v); });
    }
  }

  void require_input() const {
    if (input.empty()) fail(ErrorKind::spec, "--input (or config key 'input') is required");
  }

  io::TimeSeries load() const {
    return io::load_csv(input, value_column, skip_missing);
  }
};

struct VmdOptions {
  std::size_t modes = 4;
  double alpha = 2000.0;
  double tau = 0.0;
  double tolerance = 1e-7;
  std::size_t max_iterations = 500;
  std::string omega_init = "uniform";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd, ConfigKeys* keys = nullptr) {
    auto* o1 = cmd->add_option("--modes", modes, "Number of modes K")->capture_default_str();
    auto* o2 = cmd->add_option("--alpha", alpha, "Bandwidth penalty")->capture_default_str();
    auto* o3 = cmd->add_option("--tau", tau, "Dual ascent step (0 freezes the multiplier)")
                   ->capture_default_str();
    auto* o4 = cmd->add_option("--tolerance", tolerance, "Convergence threshold")
                   ->capture_default_str();
    auto* o5 = cmd->add_option("--max-iter", max_iterations, "Iteration cap")
                   ->capture_default_str();
    auto* o6 = cmd->add_option("--omega-init", omega_init, "Center frequency init")
                   ->check(CLI::IsMember({"uniform", "zero", "random"}))
                   ->capture_default_str();
    auto* o7 = cmd->add_option("--vmd-seed", seed, "Seed for random omega init")
                   ->capture_default_str();
    if (keys != nullptr) {
      keys->bind("modes", o1, [this](const std::string& v) { modes = config_uint("modes", v); });
      keys->bind("alpha", o2, [this](const std::string& v) { alpha = config_double("alpha", v); });
      keys->bind("tau", o3, [this](const std::string& v) { tau = config_double("tau", v); });
      keys->bind("tolerance", o4,
                 [this](const std::string& v) { tolerance = config_double("tolerance", v); });
      keys->bind("max_iter", o5,
                 [this](const std::string& v) { max_iterations = config_uint("max_iter", v); });
      keys->bind("omega_init", o6, [this](const std::string& v) { omega_init = v; });
      keys->bind("vmd_seed", o7,
                 [this](const std::string& v) { seed = config_uint("vmd_seed", v); });
    }
  }

  vmd::VmdConfig config() const {
    vmd::VmdConfig cfg;
    cfg.num_modes = modes;
    cfg.alpha = alpha;
    cfg.tau = tau;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iterations;
    cfg.omega_init = vmd::omega_init_from_string(omega_init);
    cfg.seed = seed;
    return cfg;
  }

  std::vector<std::pair<std::string, std::string>> describe() const {
    return {{"modes", std::to_string(modes)},
            {"alpha", io::double_to_decimal(alpha)},
            {"tau", io::double_to_decimal(tau)},
            {"tolerance", io::double_to_decimal(tolerance)},
            {"max_iter", std::to_string(max_iterations)},
            {"omega_init", omega_init},
            {"vmd_seed", std::to_string(seed)}};
  }
};

/// Normalized series, its mode matrix, and windows, shared by train,
/// gridsearch, and forecast.
struct PreparedData {
  pipeline::Scaler scaler;
  std::vector<double> normalized;
  pipeline::WindowedDataset windows;
  std::size_t boundary = 0;  // in-sample series length
};

PreparedData prepare(const io::TimeSeries& series, nn::Variant variant,
                     const vmd::VmdConfig& vmd_config, std::size_t seq_len,
                     double split_fraction, bool causal,
                     std::optional<pipeline::Scaler> fixed_scaler) {
  PreparedData out;
  const std::size_t n = series.values.size();
  const auto [in_len, out_len] = pipeline::chronological_split(n, split_fraction);
  out.boundary = in_len;
  out.scaler = fixed_scaler ? *fixed_scaler
                            : pipeline::Scaler::fit(series.values, in_len);
  out.normalized = out.scaler.apply_all(series.values);

  if (variant == nn::Variant::lstm) {
    Matrix raw(1, n);
    std::copy(out.normalized.begin(), out.normalized.end(), raw.data.begin());
    out.windows = pipeline::make_windows(raw, out.normalized, seq_len);
  } else if (causal) {
    out.windows =
        pipeline::make_windows_causal(out.normalized, vmd_config, seq_len);
  } else {
    const vmd::ModeSet modes = vmd::decompose(out.normalized, vmd_config);
    out.windows = pipeline::make_windows(modes.modes, out.normalized, seq_len);
  }
  return out;
}

std::vector<std::size_t> parse_grid_values(const std::string& csv,
                                           const std::set<std::size_t>& allowed,
                                           const std::string& flag) {
  std::vector<std::size_t> out;
  std::istringstream in(csv);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t v = 0;
    try {
      v = std::stoul(part);
    } catch (const std::exception&) {
      fail(ErrorKind::spec, flag + ": bad grid value '" + part + "'");
    }
    if (!allowed.contains(v)) {
      fail(ErrorKind::spec, flag + ": value " + std::to_string(v) +
                                " is outside the supported grid");
    }
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::spec, flag + ": empty grid");
  return out;
}

// ---- subcommand handlers -------------------------------------------------

struct DecomposeCmd {
  SeriesOptions series;
  VmdOptions vmd_opts;
  std::string out = "modes.csv";
  std::string meta;

  int run() {
    auto cfg = vmd_opts.describe();
    cfg.insert(cfg.begin(), {"input", series.input});
    cfg.emplace_back("out", out);
    const fs::path out_path = resolve_out(out);
    const fs::path meta_path =
        meta.empty() ? fs::path(out_path.string() + ".meta") : resolve_out(meta);
    cfg.emplace_back("meta", meta_path.string());
    print_config("decompose", cfg);

    const io::TimeSeries ts = series.load();
    const vmd::VmdConfig vmd_config = vmd_opts.config();
    const vmd::ModeSet modes = vmd::decompose(ts.values, vmd_config);
    io::write_modes_csv(out_path, modes);

    io::KvFile kv;
    kv.set("signal", series.input);
    kv.set("samples", std::uint64_t{ts.values.size()});
    kv.set("num_modes", std::uint64_t{vmd_config.num_modes});
    kv.set("alpha", vmd_config.alpha);
    kv.set("tau", vmd_config.tau);
    kv.set("tolerance", vmd_config.tolerance);
    kv.set("max_iterations", std::uint64_t{vmd_config.max_iterations});
    kv.set("omega_init", std::string(vmd::to_string(vmd_config.omega_init)));
    kv.set("seed", std::uint64_t{vmd_config.seed});
    kv.set("iterations_used", std::uint64_t{modes.iterations_used});
    kv.set("converged", modes.converged);
    for (std::size_t m = 0; m < modes.center_frequencies.size(); ++m) {
      kv.set("omega_" + std::to_string(m + 1), modes.center_frequencies[m]);
    }
    kv.save(meta_path);

    std::cout << "wrote " << out_path.string() << " and " << meta_path.string()
              << " (" << modes.iterations_used << " iterations, "
              << (modes.converged ? "converged" : "not converged") << ")\n";
    return 0;
  }
};

struct SynthCmd {
  std::size_t n = 0;
  std::vector<std::string> tones;
  double trend = 0.0;
  double ar1 = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::string out = "synthetic.csv";

  int run() {
    io::SynthSpec spec;
    spec.n = n;
    spec.trend_slope = trend;
    spec.ar1_coeff = ar1;
    spec.noise_std = noise_std;
    spec.seed = seed;
    std::string tone_desc;
    for (const std::string& t : tones) {
      const auto colon = t.find(':');
      if (colon == std::string::npos) {
        fail(ErrorKind::spec, "synth: tone must be freq:amplitude, got '" + t + "'");
      }
      try {
        spec.tones.emplace_back(std::stod(t.substr(0, colon)),
                                std::stod(t.substr(colon + 1)));
      } catch (const std::exception&) {
        fail(ErrorKind::spec, "synth: bad tone '" + t + "'");
      }
      if (!tone_desc.empty()) tone_desc += ' ';
      tone_desc += t;
    }
    print_config("synth", {{"n", std::to_string(n)},
                           {"tones", tone_desc},
                           {"trend", io::double_to_decimal(trend)},
                           {"ar1", io::double_to_decimal(ar1)},
                           {"noise_std", io::double_to_decimal(noise_std)},
                           {"seed", std::to_string(seed)},
                           {"out", out}});
    const io::TimeSeries ts = io::generate_synthetic(spec);
    io::write_series_csv(resolve_out(out), ts);
    std::cout << "wrote " << resolve_out(out).string() << " (" << ts.values.size()
              << " samples)\n";
    return 0;
  }
};

struct ModelOptions {
  std::string variant = "vmd-cnn-lstm";
  std::string preset;
  std::size_t num_kernels = 1;
  std::size_t hidden_size = 8;
  std::size_t num_layers = 1;
  std::size_t seq_len = 12;
  CLI::Option* nk_opt = nullptr;
  CLI::Option* nh_opt = nullptr;
  CLI::Option* nl_opt = nullptr;
  bool nk_from_config = false;
  bool nh_from_config = false;
  bool nl_from_config = false;

  void attach(CLI::App* cmd, ConfigKeys* keys = nullptr) {
    auto* var = cmd->add_option("--variant", variant, "Model variant")
                    ->check(CLI::IsMember({"lstm", "vmd-lstm", "vmd-cnn-lstm"}))
                    ->capture_default_str();
    auto* pre = cmd->add_option("--preset", preset,
                                "Named hyper-parameter preset (dataset1..dataset4)");
    nk_opt = cmd->add_option("--nk", num_kernels, "Reconstruction kernels n_k")
                 ->capture_default_str();
    nh_opt = cmd->add_option("--nh", hidden_size, "Hidden nodes n_h")
                 ->capture_default_str();
    nl_opt = cmd->add_option("--nl", num_layers, "Stacked layers n_l")
                 ->capture_default_str();
    auto* sl = cmd->add_option("--seq-len", seq_len, "Input sequence length L")
                   ->capture_default_str();
    if (keys != nullptr) {
      keys->bind("variant", var, [this](const std::string& v) { variant = v; });
      keys->bind("preset", pre, [this](const std::string& v) { preset = v; });
      keys->bind("nk", nk_opt, [this](const std::string& v) {
        num_kernels = config_uint("nk", v);
        nk_from_config = true;
      });
      keys->bind("nh", nh_opt, [this](const std::string& v) {
        hidden_size = config_uint("nh", v);
        nh_from_config = true;
      });
      keys->bind("nl", nl_opt, [this](const std::string& v) {
        num_layers = config_uint("nl", v);
        nl_from_config = true;
      });
      keys->bind("seq_len", sl,
                 [this](const std::string& v) { seq_len = config_uint("seq_len", v); });
    }
  }

  pipeline::ModelSpec spec(std::size_t modes) const {
    const nn::Variant v = nn::variant_from_string(variant);
    pipeline::ModelSpec spec;
    if (!preset.empty()) {
      spec = pipeline::preset(preset, v);
    } else {
      spec.variant = v;
      spec.num_kernels = num_kernels;
      spec.hidden_size = hidden_size;
      spec.num_layers = num_layers;
    }
    // explicit flags or config keys override the preset
    if ((nk_opt != nullptr && nk_opt->count() > 0) || nk_from_config) spec.num_kernels = num_kernels;
    if ((nh_opt != nullptr && nh_opt->count() > 0) || nh_from_config) spec.hidden_size = hidden_size;
    if ((nl_opt != nullptr && nl_opt->count() > 0) || nl_from_config) spec.num_layers = num_layers;
    spec.seq_len = seq_len;
    spec.modes = modes;
    return spec;
  }
};

struct TrainCmd {
  SeriesOptions series;
  VmdOptions vmd_opts;
  ModelOptions model_opts;
  std::size_t epochs = 2000;
  std::size_t batch = 128;
  std::uint64_t seed = 0;
  double split = 0.8;
  bool causal = false;
  std::string out = "model.ckpt";
  std::string curve = "loss_curve.csv";
  std::string config_path;
  ConfigKeys keys;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration file (key = value)");
    series.attach(cmd, &keys);
    vmd_opts.attach(cmd, &keys);
    model_opts.attach(cmd, &keys);
    auto* e = cmd->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    auto* b = cmd->add_option("--batch", batch, "Mini-batch size")->capture_default_str();
    auto* sd = cmd->add_option("--seed", seed, "Training seed")->capture_default_str();
    auto* sp = cmd->add_option("--split", split, "In-sample fraction")->capture_default_str();
    auto* ca = cmd->add_flag("--causal", causal,
                             "Decompose per window using only past data");
    auto* o = cmd->add_option("--out", out, "Checkpoint path")->capture_default_str();
    auto* cv = cmd->add_option("--curve", curve, "Loss curve CSV path")->capture_default_str();
    keys.bind("epochs", e, [this](const std::string& v) { epochs = config_uint("epochs", v); });
    keys.bind("batch", b, [this](const std::string& v) { batch = config_uint("batch", v); });
    keys.bind("seed", sd, [this](const std::string& v) { seed = config_uint("seed", v); });
    keys.bind("split", sp, [this](const std::string& v) { split = config_double("split", v); });
    keys.bind("causal", ca, [this](const std::string& v) { causal = config_bool("causal", v); });
    keys.bind("out", o, [this](const std::string& v) { out = v; });
    keys.bind("curve", cv, [this](const std::string& v) { curve = v; });
  }

  int run() {
    if (!config_path.empty()) keys.apply(io::KvFile::load(config_path));
    series.require_input();
    const vmd::VmdConfig vmd_config = vmd_opts.config();
    const pipeline::ModelSpec spec = model_opts.spec(vmd_config.num_modes);

    auto cfg = vmd_opts.describe();
    cfg.insert(cfg.begin(), {"input", series.input});
    cfg.emplace_back("variant", nn::to_string(spec.variant));
    cfg.emplace_back("nk", std::to_string(spec.num_kernels));
    cfg.emplace_back("nh", std::to_string(spec.hidden_size));
    cfg.emplace_back("nl", std::to_string(spec.num_layers));
    cfg.emplace_back("seq_len", std::to_string(spec.seq_len));
    cfg.emplace_back("epochs", std::to_string(epochs));
    cfg.emplace_back("batch", std::to_string(batch));
    cfg.emplace_back("seed", std::to_string(seed));
    cfg.emplace_back("split", io::double_to_decimal(split));
    cfg.emplace_back("causal", causal ? "true" : "false");
    cfg.emplace_back("out", out);
    cfg.emplace_back("curve", curve);
    print_config("train", cfg);

    const io::TimeSeries ts = series.load();
    const PreparedData data = prepare(ts, spec.variant, vmd_config,
                                      spec.seq_len, split, causal, std::nullopt);

    const std::size_t train_count =
        data.windows.count_targets_before(data.boundary);
    if (train_count == 0) {
      fail(ErrorKind::too_short, "train: no in-sample windows");
    }
    const pipeline::WindowedDataset train_set = data.windows.subset(0, train_count);

    pipeline::TrainConfig config;
    config.epochs = epochs;
    config.batch_size = batch;
    config.seed = seed;

    nn::Model model = pipeline::assemble(spec, seed);
    const pipeline::TrainResult result = pipeline::train(model, train_set, config);

    const io::Checkpoint ckpt =
        io::make_checkpoint(model, spec, data.scaler, vmd_config, seed, epochs,
                            result.final_train_mse());
    io::save_checkpoint(ckpt, resolve_out(out));
    io::write_curve_csv(resolve_out(curve), result.curve);
    std::cout << "wrote " << resolve_out(out).string() << " and "
              << resolve_out(curve).string() << " (final train mse "
              << io::double_to_decimal(result.final_train_mse()) << ")\n";
    return 0;
  }
};

struct ForecastCmd {
  SeriesOptions series;
  std::string checkpoint;
  bool causal = false;
  std::string out = "predictions.csv";

  int run() {
    print_config("forecast", {{"checkpoint", checkpoint},
                              {"input", series.input},
                              {"causal", causal ? "true" : "false"},
                              {"out", out}});
    const io::Checkpoint ckpt = io::load_checkpoint(checkpoint);
    nn::Model model = io::restore_model(ckpt);
    const io::TimeSeries ts = series.load();
    const PreparedData data =
        prepare(ts, ckpt.spec.variant, ckpt.vmd_config, ckpt.spec.seq_len, 0.8,
                causal, ckpt.scaler);
    const std::vector<double> predictions =
        pipeline::forecast_windows(model, data.windows, data.scaler);
    io::write_predictions_csv(resolve_out(out), data.windows.target_indices,
                              predictions);
    std::cout << "wrote " << resolve_out(out).string() << " ("
              << predictions.size() << " predictions)\n";
    return 0;
  }
};

struct EvaluateCmd {
  SeriesOptions series;
  std::string predictions;
  std::vector<std::string> pred_files;
  double split = 0.8;
  std::string name = "model";
  std::string out = "metrics.csv";
  bool markdown = false;

  eval::ModelMetrics score_file(const io::TimeSeries& ts, std::size_t in_len,
                                const std::string& label,
                                const std::string& path) const {
    std::vector<double> in_actual, in_pred, out_actual, out_pred;
    for (const auto& [idx, value] : io::load_predictions_csv(path)) {
      if (idx >= ts.values.size()) {
        fail(ErrorKind::parse, "evaluate: prediction index " +
                                   std::to_string(idx) + " outside the series");
      }
      if (idx < in_len) {
        in_actual.push_back(ts.values[idx]);
        in_pred.push_back(value);
      } else {
        out_actual.push_back(ts.values[idx]);
        out_pred.push_back(value);
      }
    }
    eval::ModelMetrics row;
    row.name = label;
    if (!in_actual.empty()) row.in_sample = eval::compute_metrics(in_actual, in_pred);
    if (!out_actual.empty()) {
      row.out_of_sample = eval::compute_metrics(out_actual, out_pred);
    }
    return row;
  }

  int run() {
    std::string pred_desc = predictions;
    for (const auto& p : pred_files) {
      if (!pred_desc.empty()) pred_desc += ' ';
      pred_desc += p;
    }
    print_config("evaluate", {{"input", series.input},
                              {"predictions", pred_desc},
                              {"split", io::double_to_decimal(split)},
                              {"name", name},
                              {"out", out},
                              {"report", markdown ? "true" : "false"}});
    if (predictions.empty() && pred_files.empty()) {
      fail(ErrorKind::spec, "evaluate: need --predictions or at least one --pred");
    }
    const io::TimeSeries ts = series.load();
    const auto [in_len, out_len] =
        pipeline::chronological_split(ts.values.size(), split);

    std::vector<eval::ModelMetrics> rows;
    if (!predictions.empty()) {
      rows.push_back(score_file(ts, in_len, name, predictions));
    }
    for (const std::string& spec : pred_files) {
      const auto eq = spec.find('=');
      const std::string label =
          eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
      const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
      rows.push_back(score_file(ts, in_len, label, path));
    }

    const fs::path csv_path = resolve_out(out);
    io::write_file(csv_path, eval::metrics_table_csv(rows));
    const std::string text = eval::metrics_table_text(rows);
    io::write_file(fs::path(csv_path.string() + ".txt"), text);
    if (markdown) {
      io::write_file(fs::path(csv_path.string() + ".md"),
                     eval::metrics_table_markdown(rows));
    }
    std::cout << text;
    return 0;
  }
};

struct GridSearchCmd {
  SeriesOptions series;
  VmdOptions vmd_opts;
  std::string variant = "vmd-cnn-lstm";
  std::string grid_nk = "1,3,5,7";
  std::string grid_nh = "6,8,10,12";
  std::string grid_nl = "1,2,3";
  std::size_t seq_len = 12;
  std::size_t epochs = 2000;
  std::size_t batch = 128;
  std::uint64_t seed = 0;
  double split = 0.8;
  double validation_fraction = 0.2;
  bool causal = false;
  std::size_t jobs = 1;
  std::string out = "best.ckpt";
  std::string table = "grid_scores.csv";
  std::string curve = "best_curve.csv";
  std::string config_path;
  ConfigKeys keys;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration file (key = value)");
    series.attach(cmd, &keys);
    vmd_opts.attach(cmd, &keys);
    auto* var = cmd->add_option("--variant", variant, "Model variant")
                    ->check(CLI::IsMember({"lstm", "vmd-lstm", "vmd-cnn-lstm"}))
                    ->capture_default_str();
    auto* gk = cmd->add_option("--grid-nk", grid_nk, "Kernel grid")->capture_default_str();
    auto* gh = cmd->add_option("--grid-nh", grid_nh, "Hidden size grid")->capture_default_str();
    auto* gl = cmd->add_option("--grid-nl", grid_nl, "Layer count grid")->capture_default_str();
    auto* sl = cmd->add_option("--seq-len", seq_len, "Input sequence length L")
                   ->capture_default_str();
    auto* e = cmd->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    auto* b = cmd->add_option("--batch", batch, "Mini-batch size")->capture_default_str();
    auto* sd = cmd->add_option("--seed", seed, "Base seed (job k uses seed+k)")
                   ->capture_default_str();
    auto* sp = cmd->add_option("--split", split, "In-sample fraction")->capture_default_str();
    auto* vf = cmd->add_option("--validation-fraction", validation_fraction,
                               "Holdout share of in-sample windows")
                   ->capture_default_str();
    auto* ca = cmd->add_flag("--causal", causal,
                             "Decompose per window using only past data");
    auto* j = cmd->add_option("--jobs", jobs, "Parallel training jobs")->capture_default_str();
    auto* o = cmd->add_option("--out", out, "Best checkpoint path")->capture_default_str();
    auto* tb = cmd->add_option("--table", table, "Score table CSV path")->capture_default_str();
    auto* cv = cmd->add_option("--curve", curve, "Best model loss curve path")
                   ->capture_default_str();
    keys.bind("variant", var, [this](const std::string& v) { variant = v; });
    keys.bind("grid_nk", gk, [this](const std::string& v) { grid_nk = v; });
    keys.bind("grid_nh", gh, [this](const std::string& v) { grid_nh = v; });
    keys.bind("grid_nl", gl, [this](const std::string& v) { grid_nl = v; });
    keys.bind("seq_len", sl, [this](const std::string& v) { seq_len = config_uint("seq_len", v); });
    keys.bind("epochs", e, [this](const std::string& v) { epochs = config_uint("epochs", v); });
    keys.bind("batch", b, [this](const std::string& v) { batch = config_uint("batch", v); });
    keys.bind("seed", sd, [this](const std::string& v) { seed = config_uint("seed", v); });
    keys.bind("split", sp, [this](const std::string& v) { split = config_double("split", v); });
    keys.bind("validation_fraction", vf, [this](const std::string& v) {
      validation_fraction = config_double("validation_fraction", v);
    });
    keys.bind("causal", ca, [this](const std::string& v) { causal = config_bool("causal", v); });
    keys.bind("jobs", j, [this](const std::string& v) { jobs = config_uint("jobs", v); });
    keys.bind("out", o, [this](const std::string& v) { out = v; });
    keys.bind("table", tb, [this](const std::string& v) { table = v; });
    keys.bind("curve", cv, [this](const std::string& v) { curve = v; });
  }

  int run() {
    if (!config_path.empty()) keys.apply(io::KvFile::load(config_path));
    series.require_input();
    const vmd::VmdConfig vmd_config = vmd_opts.config();
    const nn::Variant v = nn::variant_from_string(variant);

    auto cfg = vmd_opts.describe();
    cfg.insert(cfg.begin(), {"input", series.input});
    cfg.emplace_back("variant", variant);
    cfg.emplace_back("grid_nk", grid_nk);
    cfg.emplace_back("grid_nh", grid_nh);
    cfg.emplace_back("grid_nl", grid_nl);
    cfg.emplace_back("seq_len", std::to_string(seq_len));
    cfg.emplace_back("epochs", std::to_string(epochs));
    cfg.emplace_back("batch", std::to_string(batch));
    cfg.emplace_back("seed", std::to_string(seed));
    cfg.emplace_back("split", io::double_to_decimal(split));
    cfg.emplace_back("validation_fraction",
                     io::double_to_decimal(validation_fraction));
    cfg.emplace_back("causal", causal ? "true" : "false");
    cfg.emplace_back("jobs", std::to_string(jobs));
    cfg.emplace_back("out", out);
    cfg.emplace_back("table", table);
    print_config("gridsearch", cfg);

    pipeline::GridSpec grids;
    grids.num_kernels = parse_grid_values(grid_nk, {1, 3, 5, 7}, "--grid-nk");
    grids.hidden_sizes = parse_grid_values(grid_nh, {6, 8, 10, 12}, "--grid-nh");
    grids.num_layers = parse_grid_values(grid_nl, {1, 2, 3}, "--grid-nl");

    const io::TimeSeries ts = series.load();
    const PreparedData data =
        prepare(ts, v, vmd_config, seq_len, split, causal, std::nullopt);
    const std::size_t train_count =
        data.windows.count_targets_before(data.boundary);
    if (train_count == 0) {
      fail(ErrorKind::too_short, "gridsearch: no in-sample windows");
    }
    const pipeline::WindowedDataset in_sample = data.windows.subset(0, train_count);

    pipeline::TrainConfig config;
    config.epochs = epochs;
    config.batch_size = batch;
    config.seed = seed;
    config.validation_fraction = validation_fraction;

    pipeline::GridSearchOptions options;
    options.jobs = jobs;
    pipeline::GridSearchResult result = pipeline::grid_search(
        v, in_sample, grids, config, vmd_config.num_modes, seq_len, options);

    std::string table_csv = "nk,nh,nl,seed,validation_rmse\n";
    for (const auto& score : result.table) {
      table_csv += std::to_string(score.spec.num_kernels) + ',' +
                   std::to_string(score.spec.hidden_size) + ',' +
                   std::to_string(score.spec.num_layers) + ',' +
                   std::to_string(score.seed) + ',' +
                   io::double_to_decimal(score.validation_rmse) + '\n';
    }
    io::write_file(resolve_out(table), table_csv);

    const io::Checkpoint ckpt = io::make_checkpoint(
        result.best_model, result.best, data.scaler, vmd_config,
        result.best_seed, epochs, result.best_training.final_train_mse());
    io::save_checkpoint(ckpt, resolve_out(out));
    io::write_curve_csv(resolve_out(curve), result.best_training.curve);

    std::cout << "best: nk=" << result.best.num_kernels
              << " nh=" << result.best.hidden_size
              << " nl=" << result.best.num_layers << " ("
              << result.table.size() << " grid points)\n";
    std::cout << "wrote " << resolve_out(table).string() << ", "
              << resolve_out(out).string() << ", "
              << resolve_out(curve).string() << '\n';
    return 0;
  }
};

struct DmTestCmd {
  SeriesOptions series;
  std::vector<std::string> pred_files;
  double split = 0.8;
  std::string scope = "out";
  std::string out = "dm.csv";
  bool markdown = false;

  int run() {
    std::string pred_desc;
    for (const auto& p : pred_files) {
      if (!pred_desc.empty()) pred_desc += ' ';
      pred_desc += p;
    }
    print_config("dmtest", {{"actuals", series.input},
                            {"predictions", pred_desc},
                            {"split", io::double_to_decimal(split)},
                            {"scope", scope},
                            {"out", out},
                            {"report", markdown ? "true" : "false"}});
    if (pred_files.size() < 2) {
      fail(ErrorKind::spec, "dmtest: need at least two prediction files");
    }
    const io::TimeSeries ts = series.load();
    const auto [in_len, out_len] =
        pipeline::chronological_split(ts.values.size(), split);

    std::vector<std::string> names;
    std::vector<std::map<std::size_t, double>> by_index;
    for (const std::string& spec : pred_files) {
      const auto eq = spec.find('=');
      std::string name = spec;
      std::string path = spec;
      if (eq != std::string::npos) {
        name = spec.substr(0, eq);
        path = spec.substr(eq + 1);
      } else {
        name = fs::path(spec).stem().string();
      }
      names.push_back(name);
      std::map<std::size_t, double> m;
      for (const auto& [idx, value] : io::load_predictions_csv(path)) {
        m[idx] = value;
      }
      by_index.push_back(std::move(m));
    }

    // indices present in every file, restricted to the requested scope
    std::vector<std::size_t> common;
    for (const auto& [idx, value] : by_index.front()) {
      if (idx >= ts.values.size()) continue;
      const bool in_scope = scope == "all" ||
                            (scope == "in" && idx < in_len) ||
                            (scope == "out" && idx >= in_len);
      if (!in_scope) continue;
      bool everywhere = true;
      for (std::size_t f = 1; f < by_index.size(); ++f) {
        if (!by_index[f].contains(idx)) {
          everywhere = false;
          break;
        }
      }
      if (everywhere) common.push_back(idx);
    }
    if (common.size() < 10) {
      fail(ErrorKind::spec,
           "dmtest: fewer than 10 shared predictions in scope '" + scope + "'");
    }

    std::vector<std::vector<double>> errors(names.size());
    for (std::size_t f = 0; f < names.size(); ++f) {
      errors[f].reserve(common.size());
      for (std::size_t idx : common) {
        errors[f].push_back(by_index[f].at(idx) - ts.values[idx]);
      }
    }

    const eval::DmMatrix matrix = eval::dm_matrix(names, errors);
    bool any_defined = false;
    for (const auto& row : matrix.cells) {
      for (const auto& cell : row) any_defined = any_defined || cell.has_value();
    }
    if (!any_defined) {
      fail(ErrorKind::zero_variance,
           "dmtest: every pairwise loss differential has zero variance");
    }
    const fs::path csv_path = resolve_out(out);
    io::write_file(csv_path, eval::dm_table_csv(matrix));
    const std::string text = eval::dm_table_text(matrix);
    io::write_file(fs::path(csv_path.string() + ".txt"), text);
    if (markdown) {
      io::write_file(fs::path(csv_path.string() + ".md"),
                     eval::dm_table_markdown(matrix));
    }
    std::cout << text;
    return 0;
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"modecast: decomposition-reconstruction-ensemble forecasting"};
  app.require_subcommand(1);

  DecomposeCmd decompose_cmd;
  auto* dec = app.add_subcommand("decompose", "Decompose a series into band-limited modes");
  decompose_cmd.series.attach(dec);
  decompose_cmd.vmd_opts.attach(dec);
  dec->add_option("--out", decompose_cmd.out, "Mode CSV path")->capture_default_str();
  dec->add_option("--meta", decompose_cmd.meta, "Metadata path (default: <out>.meta)");

  SynthCmd synth_cmd;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic series");
  synth->add_option("--n", synth_cmd.n, "Number of samples")->required();
  synth->add_option("--tone", synth_cmd.tones,
                    "Sinusoid as freq:amplitude (repeatable)");
  synth->add_option("--trend", synth_cmd.trend, "Linear trend slope")
      ->capture_default_str();
  synth->add_option("--ar1", synth_cmd.ar1, "AR(1) coefficient")
      ->capture_default_str();
  synth->add_option("--noise-std", synth_cmd.noise_std,
                    "Innovation standard deviation")
      ->capture_default_str();
  synth->add_option("--seed", synth_cmd.seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", synth_cmd.out, "Output CSV path")->capture_default_str();

  TrainCmd train_cmd;
  auto* train = app.add_subcommand("train", "Train a forecasting model");
  train_cmd.attach(train);

  ForecastCmd forecast_cmd;
  auto* forecast = app.add_subcommand("forecast", "Forecast with a trained checkpoint");
  forecast_cmd.series.attach(forecast);
  forecast->add_option("--checkpoint", forecast_cmd.checkpoint, "Checkpoint path")
      ->required();
  forecast->add_flag("--causal", forecast_cmd.causal,
                     "Decompose per window using only past data");
  forecast->add_option("--out", forecast_cmd.out, "Predictions CSV path")
      ->capture_default_str();

  EvaluateCmd evaluate_cmd;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against a series");
  evaluate_cmd.series.attach(evaluate);
  evaluate->add_option("--predictions", evaluate_cmd.predictions,
                       "Predictions CSV path (single model, labeled --name)");
  evaluate->add_option("--pred", evaluate_cmd.pred_files,
                       "Prediction file as name=path (repeatable)");
  evaluate->add_option("--split", evaluate_cmd.split, "In-sample fraction")
      ->capture_default_str();
  evaluate->add_option("--name", evaluate_cmd.name, "Model label")->capture_default_str();
  evaluate->add_option("--out", evaluate_cmd.out, "Report CSV path")->capture_default_str();
  evaluate->add_flag("--report", evaluate_cmd.markdown, "Also emit a Markdown table");

  GridSearchCmd grid_cmd;
  auto* grid = app.add_subcommand("gridsearch", "Hyper-parameter grid search");
  grid_cmd.attach(grid);

  DmTestCmd dm_cmd;
  auto* dm = app.add_subcommand("dmtest", "Pairwise forecast comparison");
  dm_cmd.series.attach(dm);
  dm->add_option("--pred", dm_cmd.pred_files,
                 "Prediction file as name=path (repeatable, >= 2)")
      ->required();
  dm->add_option("--split", dm_cmd.split, "In-sample fraction")->capture_default_str();
  dm->add_option("--scope", dm_cmd.scope, "Evaluation slice")
      ->check(CLI::IsMember({"in", "out", "all"}))
      ->capture_default_str();
  dm->add_option("--out", dm_cmd.out, "DM table CSV path")->capture_default_str();
  dm->add_flag("--report", dm_cmd.markdown, "Also emit a Markdown table");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);  // prints the diagnostic
    return 1;
  }

  try {
    if (dec->parsed()) return decompose_cmd.run();
    if (synth->parsed()) return synth_cmd.run();
    if (train->parsed()) return train_cmd.run();
    if (forecast->parsed()) return forecast_cmd.run();
    if (evaluate->parsed()) return evaluate_cmd.run();
    if (grid->parsed()) return grid_cmd.run();
    if (dm->parsed()) return dm_cmd.run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace modecast::cli
