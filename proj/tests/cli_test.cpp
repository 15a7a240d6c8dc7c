#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "modecast/cli/app.hpp"
#include "modecast/io/checkpoint.hpp"
#include "modecast/io/csv.hpp"
#include "modecast/io/kv.hpp"

using namespace modecast;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("modecast_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::initializer_list<std::string> args) {
  return cli::run(std::vector<std::string>(args));
}

}  // namespace

TEST_CASE("help exits cleanly for every subcommand") {
  CHECK(run({"--help"}) == 0);
  for (const char* sub : {"decompose", "synth", "train", "forecast", "evaluate",
                          "gridsearch", "dmtest"}) {
    CHECK(run({sub, "--help"}) == 0);
  }
}

TEST_CASE("unknown flags are usage errors and leave no output files") {
  TempDir dir;
  const std::string out = dir.file("should_not_exist.csv");
  CHECK(run({"synth", "--n", "64", "--bogus-flag", "--out", out}) == 1);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("MODECAST_OUT_DIR rebases relative output paths") {
  TempDir dir;
  ::setenv("MODECAST_OUT_DIR", dir.path.c_str(), 1);
  CHECK(run({"synth", "--n", "64", "--tone", "0.1:1.0", "--out", "rel.csv"}) == 0);
  ::unsetenv("MODECAST_OUT_DIR");
  CHECK(fs::exists(dir.path / "rel.csv"));
}

TEST_CASE("missing input file is a data error") {
  TempDir dir;
  CHECK(run({"decompose", "--input", dir.file("absent.csv"), "--out",
             dir.file("m.csv")}) == 2);
}

TEST_CASE("decompose emits K+2 columns and a metadata file") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "256", "--tone", "0.05:1.0", "--tone", "0.2:0.5",
               "--out", series}) == 0);
  const std::string modes = dir.file("modes.csv");
  REQUIRE(run({"decompose", "--input", series, "--modes", "4", "--alpha",
               "2000", "--out", modes}) == 0);

  const std::string header = io::read_file(modes).substr(0, 64);
  CHECK(header.rfind("t,mode_1,mode_2,mode_3,mode_4,residual", 0) == 0);

  const io::KvFile meta = io::KvFile::load(modes + ".meta");
  CHECK(meta.require_uint("num_modes") == 4);
  CHECK(meta.has("omega_4"));
  CHECK(meta.has("converged"));
}

TEST_CASE("train, forecast, evaluate, dmtest round trip") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "220", "--tone", "0.04:1.0", "--tone",
               "0.13:0.5", "--ar1", "0.5", "--noise-std", "0.05", "--seed",
               "3", "--out", series}) == 0);

  const std::string ckpt = dir.file("model.ckpt");
  const std::string curve = dir.file("curve.csv");
  REQUIRE(run({"train", "--input", series, "--variant", "vmd-lstm", "--modes",
               "2", "--nh", "4", "--nl", "1", "--epochs", "3", "--batch", "32",
               "--seed", "11", "--out", ckpt, "--curve", curve}) == 0);
  CHECK(fs::exists(ckpt));
  const std::string curve_text = io::read_file(curve);
  CHECK(curve_text.rfind("epoch,lr,train_mse", 0) == 0);

  SUBCASE("training is reproducible byte for byte") {
    const std::string ckpt2 = dir.file("model2.ckpt");
    REQUIRE(run({"train", "--input", series, "--variant", "vmd-lstm", "--modes",
                 "2", "--nh", "4", "--nl", "1", "--epochs", "3", "--batch",
                 "32", "--seed", "11", "--out", ckpt2, "--curve",
                 dir.file("curve2.csv")}) == 0);
    CHECK(io::read_file(ckpt) == io::read_file(ckpt2));
  }

  const std::string preds = dir.file("preds.csv");
  REQUIRE(run({"forecast", "--checkpoint", ckpt, "--input", series, "--out",
               preds}) == 0);
  const auto loaded = io::load_predictions_csv(preds);
  CHECK(loaded.size() == 220 - 12);
  CHECK(loaded.front().first == 12);

  const std::string report = dir.file("metrics.csv");
  REQUIRE(run({"evaluate", "--input", series, "--predictions", preds, "--out",
               report, "--report", "--name", "vmd-lstm"}) == 0);
  CHECK(fs::exists(report));
  CHECK(fs::exists(report + ".txt"));
  CHECK(fs::exists(report + ".md"));

  SUBCASE("dmtest compares two prediction files") {
    // a second model: raw lstm
    const std::string ckpt_b = dir.file("lstm.ckpt");
    REQUIRE(run({"train", "--input", series, "--variant", "lstm", "--nh", "4",
                 "--nl", "1", "--epochs", "3", "--batch", "32", "--seed", "12",
                 "--out", ckpt_b, "--curve", dir.file("curve_b.csv")}) == 0);
    const std::string preds_b = dir.file("preds_b.csv");
    REQUIRE(run({"forecast", "--checkpoint", ckpt_b, "--input", series,
                 "--out", preds_b}) == 0);

    const std::string dm = dir.file("dm.csv");
    REQUIRE(run({"dmtest", "--input", series, "--pred", "vmd-lstm=" + preds,
                 "--pred", "lstm=" + preds_b, "--out", dm}) == 0);
    const std::string table = io::read_file(dm);
    CHECK(table.find("vmd-lstm") != std::string::npos);
    CHECK(table.find('(') != std::string::npos);
  }

  SUBCASE("evaluate on a perfect prediction file reports zeros") {
    const io::TimeSeries ts = io::load_csv(series, "value", true);
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    for (std::size_t i = 12; i < ts.values.size(); ++i) {
      idx.push_back(i);
      vals.push_back(ts.values[i]);
    }
    const std::string perfect = dir.file("perfect.csv");
    io::write_predictions_csv(perfect, idx, vals);
    const std::string rep = dir.file("perfect_metrics.csv");
    REQUIRE(run({"evaluate", "--input", series, "--predictions", perfect,
                 "--out", rep}) == 0);
    const std::string text = io::read_file(rep);
    CHECK(text.find("0.0000,0.0000,0.00%,0.0000,0.0000,0.00%") != std::string::npos);
  }
}

TEST_CASE("evaluate emits one row per prediction file") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "100", "--tone", "0.05:1.0", "--noise-std",
               "0.05", "--ar1", "0.2", "--seed", "13", "--out", series}) == 0);
  const io::TimeSeries ts = io::load_csv(series, "value", true);
  std::vector<std::size_t> idx;
  std::vector<double> exact, shifted;
  for (std::size_t i = 12; i < ts.values.size(); ++i) {
    idx.push_back(i);
    exact.push_back(ts.values[i]);
    shifted.push_back(ts.values[i] + 0.5);
  }
  const std::string pa = dir.file("pa.csv");
  const std::string pb = dir.file("pb.csv");
  io::write_predictions_csv(pa, idx, exact);
  io::write_predictions_csv(pb, idx, shifted);

  const std::string out = dir.file("table.csv");
  REQUIRE(run({"evaluate", "--input", series, "--pred", "exact=" + pa,
               "--pred", "biased=" + pb, "--out", out}) == 0);
  const std::string table = io::read_file(out);
  CHECK(table.find("exact,0.0000") != std::string::npos);
  CHECK(table.find("biased,0.5000") != std::string::npos);
}

TEST_CASE("causal training and forecasting run end to end") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "90", "--tone", "0.06:1.0", "--tone",
               "0.21:0.4", "--seed", "17", "--out", series}) == 0);
  const std::string ckpt = dir.file("causal.ckpt");
  REQUIRE(run({"train", "--input", series, "--variant", "vmd-lstm", "--modes",
               "2", "--nh", "3", "--nl", "1", "--epochs", "2", "--batch", "32",
               "--seed", "19", "--causal", "--out", ckpt, "--curve",
               dir.file("causal_curve.csv")}) == 0);
  const std::string preds = dir.file("causal_preds.csv");
  REQUIRE(run({"forecast", "--checkpoint", ckpt, "--input", series, "--causal",
               "--out", preds}) == 0);
  const auto loaded = io::load_predictions_csv(preds);
  // causal windows start once the decomposition prefix is long enough
  CHECK(loaded.front().first == 16);
  CHECK(loaded.back().first == 89);
}

TEST_CASE("corrupt checkpoints are data errors") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "64", "--tone", "0.05:1.0", "--seed", "3",
               "--out", series}) == 0);
  const std::string bad = dir.file("bad.ckpt");
  io::write_file(bad, "modecast checkpoint v1\n[model]\nvariant = lstm\n");
  CHECK(run({"forecast", "--checkpoint", bad, "--input", series, "--out",
             dir.file("p.csv")}) == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "64", "--tone", "0.05:1.0", "--noise-std",
               "0.1", "--ar1", "0.2", "--seed", "23", "--out", series}) == 0);
  const io::TimeSeries ts = io::load_csv(series, "value", true);
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  for (std::size_t i = 12; i < ts.values.size(); ++i) {
    idx.push_back(i);
    vals.push_back(ts.values[i] + 0.25);
  }
  const std::string p = dir.file("p.csv");
  io::write_predictions_csv(p, idx, vals);
  // identical error sequences: the loss differentials have zero variance
  CHECK(run({"dmtest", "--input", series, "--pred", "a=" + p, "--pred",
             "b=" + p, "--scope", "all", "--out", dir.file("dm.csv")}) == 3);
}

TEST_CASE("presets select the published hyper-parameters") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "120", "--tone", "0.05:1.0", "--seed", "5",
               "--out", series}) == 0);
  const std::string ckpt = dir.file("preset.ckpt");
  REQUIRE(run({"train", "--input", series, "--variant", "vmd-cnn-lstm",
               "--preset", "dataset1", "--epochs", "0", "--out", ckpt,
               "--curve", dir.file("c.csv")}) == 0);
  const io::Checkpoint loaded = io::load_checkpoint(ckpt);
  CHECK(loaded.spec.num_kernels == 5);
  CHECK(loaded.spec.hidden_size == 12);
  CHECK(loaded.spec.num_layers == 2);
}

TEST_CASE("gridsearch writes a score table and best checkpoint") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "120", "--tone", "0.06:1.0", "--seed", "6",
               "--out", series}) == 0);
  const std::string table = dir.file("scores.csv");
  const std::string best = dir.file("best.ckpt");
  REQUIRE(run({"gridsearch", "--input", series, "--variant", "vmd-lstm",
               "--modes", "2", "--grid-nh", "6,8", "--grid-nl", "1", "--epochs",
               "1", "--batch", "32", "--out", best, "--table", table,
               "--curve", dir.file("bc.csv")}) == 0);
  const std::string scores = io::read_file(table);
  CHECK(scores.rfind("nk,nh,nl,seed,validation_rmse", 0) == 0);
  // header + 2 rows
  CHECK(std::count(scores.begin(), scores.end(), '\n') == 3);
  CHECK(fs::exists(best));

  SUBCASE("parallel jobs reproduce the serial score table") {
    const std::string table2 = dir.file("scores_par.csv");
    REQUIRE(run({"gridsearch", "--input", series, "--variant", "vmd-lstm",
                 "--modes", "2", "--grid-nh", "6,8", "--grid-nl", "1",
                 "--epochs", "1", "--batch", "32", "--jobs", "2", "--out",
                 dir.file("best_par.ckpt"), "--table", table2, "--curve",
                 dir.file("bc2.csv")}) == 0);
    CHECK(io::read_file(table2) == io::read_file(table));
  }

  SUBCASE("grid values outside the supported sets are usage errors") {
    CHECK(run({"gridsearch", "--input", series, "--variant", "vmd-lstm",
               "--modes", "2", "--grid-nh", "5", "--epochs", "1", "--out",
               dir.file("x.ckpt"), "--table", dir.file("x.csv")}) == 1);
  }
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  REQUIRE(run({"synth", "--n", "100", "--tone", "0.05:1.0", "--seed", "8",
               "--out", series}) == 0);

  const std::string cfg = dir.file("run.cfg");
  io::write_file(cfg, "input = " + series +
                          "\nvariant = vmd-lstm\nmodes = 2\nnh = 4\nnl = 1\n"
                          "epochs = 2\nbatch = 16\nseed = 9\n");
  const std::string ckpt = dir.file("from_config.ckpt");
  REQUIRE(run({"train", "--config", cfg, "--epochs", "1", "--out", ckpt,
               "--curve", dir.file("cc.csv")}) == 0);
  const io::Checkpoint loaded = io::load_checkpoint(ckpt);
  CHECK(loaded.spec.hidden_size == 4);
  CHECK(loaded.epochs == 1);  // flag beat the config file
}
