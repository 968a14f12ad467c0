// Copyright 2026 the rramnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rramnet/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "rramnet/config.hpp"
#include "rramnet/errors.hpp"
#include "rramnet/experiment.hpp"
#include "rramnet/measurements.hpp"
#include "rramnet/snapshot.hpp"

namespace rramnet::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", opts.config_path, "experiment config file")->required();
  }
  cmd->add_option("--set", opts.sets, "override a config key, KEY=VALUE (repeatable)");
  cmd->add_option("--out", opts.out_dir, "output directory (default: $RRAMNET_OUT or .)");
  cmd->add_option("--seed", opts.seed, "override run.seed")->each([&opts](const std::string&) {
    opts.seed_given = true;
  });
}

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RRAMNET_OUT"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return ".";
}

void apply_sets(ExperimentConfig& cfg, const CommonOpts& opts) {
  for (const std::string& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set " + s, "expected KEY=VALUE");
    }
    apply_override(cfg, s.substr(0, eq), s.substr(eq + 1), "--set " + s);
  }
  if (opts.seed_given) cfg.seed = opts.seed;
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = parse_config_file(opts.config_path);
  apply_sets(cfg, opts);
  validate(cfg);
  return cfg;
}

void require_data_paths(const ExperimentConfig& cfg, bool train_split) {
  if (train_split && (cfg.train_images.empty() || cfg.train_labels.empty())) {
    throw ConfigError("config", "data.train_images / data.train_labels not set");
  }
  if (cfg.test_images.empty() || cfg.test_labels.empty()) {
    throw ConfigError("config", "data.test_images / data.test_labels not set");
  }
}

QuantSpec<double> input_quant(const ExperimentConfig& cfg) {
  QuantSpec<double> q;
  q.neuron_bits = cfg.neuron_bits;
  q.enabled = cfg.quant_enabled;
  return q;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError(path.string(), 0, "cannot open for writing");
  os << text;
  if (!os) throw DataError(path.string(), 0, "write failure");
}

int run_train(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  require_data_paths(cfg, true);
  const fs::path out_dir = resolve_out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const RawDataset raw_train = load_idx(cfg.train_images, cfg.train_labels);
  const RawDataset raw_test = load_idx(cfg.test_images, cfg.test_labels);
  const Dataset train_ds = normalize_quantize(raw_train, input_quant(cfg), Split::Train);
  const Dataset test_ds = normalize_quantize(raw_test, input_quant(cfg), Split::Test);

  TrainOutput res = train(cfg, train_ds, test_ds, &std::cout);

  write_text_file(out_dir / "effective.cfg", serialize_config(res.resolved));
  {
    std::ofstream os(out_dir / "results.csv", std::ios::binary);
    if (!os) throw DataError((out_dir / "results.csv").string(), 0, "cannot open for writing");
    std::vector<SweepCell> cells(1);
    cells[0].run_id = 0;
    cells[0].config = res.resolved;
    cells[0].record = res.record;
    cells[0].steps = res.steps;
    write_results_csv(os, cells);
  }
  save_snapshot((out_dir / "snapshot.bin").string(), make_snapshot(res.net, res.resolved, res.steps));

  if (!res.record.epochs.empty()) {
    std::printf("final: epoch %d accuracy %.6g%%\n", res.record.epochs.back().epoch,
                res.record.epochs.back().test_accuracy);
  }
  std::cout << "wrote " << (out_dir / "results.csv").string() << ", "
            << (out_dir / "snapshot.bin").string() << ", "
            << (out_dir / "effective.cfg").string() << std::endl;
  return 0;
}

std::vector<SweepAxis> parse_axes(const std::vector<std::string>& axis_specs) {
  std::vector<SweepAxis> axes;
  for (const std::string& spec : axis_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--axis " + spec, "expected KEY=v1,v2,...");
    }
    SweepAxis ax;
    ax.key = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string v =
          comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
      if (!v.empty()) ax.values.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (ax.values.empty()) throw ConfigError("--axis " + spec, "axis has no values");
    axes.push_back(std::move(ax));
  }
  return axes;
}

int run_sweep(const CommonOpts& opts, const std::vector<std::string>& axis_specs, int jobs) {
  const ExperimentConfig base = load_config(opts);
  require_data_paths(base, true);
  const std::vector<SweepAxis> axes = parse_axes(axis_specs);
  const fs::path out_dir = resolve_out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const RawDataset raw_train = load_idx(base.train_images, base.train_labels);
  const RawDataset raw_test = load_idx(base.test_images, base.test_labels);

  const std::vector<SweepCell> cells = sweep(base, axes, raw_train, raw_test, jobs, &std::cout);

  {
    std::ofstream os(out_dir / "sweep.csv", std::ios::binary);
    if (!os) throw DataError((out_dir / "sweep.csv").string(), 0, "cannot open for writing");
    write_results_csv(os, cells);
  }
  std::string echo = serialize_config(base);
  echo += "# sweep axes:\n";
  for (const SweepAxis& ax : axes) {
    echo += "# axis " + ax.key + " =";
    for (std::size_t i = 0; i < ax.values.size(); ++i) {
      echo += (i == 0 ? " " : ",") + ax.values[i];
    }
    echo += "\n";
  }
  write_text_file(out_dir / "effective.cfg", echo);
  std::cout << "wrote " << (out_dir / "sweep.csv").string() << " (" << cells.size()
            << " runs)" << std::endl;
  return 0;
}

int run_eval(const std::string& snapshot_path, const CommonOpts& opts) {
  const Snapshot snap = load_snapshot(snapshot_path);
  ExperimentConfig cfg = parse_config_text(snap.config_echo, snapshot_path + " (config echo)");
  apply_sets(cfg, opts);
  validate(cfg);
  require_data_paths(cfg, false);
  const Network<double> net = network_from_snapshot(snap);

  const RawDataset raw_test = load_idx(cfg.test_images, cfg.test_labels);
  const Dataset test_ds = normalize_quantize(raw_test, input_quant(cfg), Split::Test);
  const double acc = evaluate(net, test_ds);
  std::printf("accuracy = %.6g%% (%lld samples, %llu training steps)\n", acc,
              static_cast<long long>(test_ds.size()),
              static_cast<unsigned long long>(snap.steps));
  return 0;
}

int run_export(const std::string& snapshot_path, int bins, const CommonOpts& opts) {
  const Snapshot snap = load_snapshot(snapshot_path);
  const Network<double> net = network_from_snapshot(snap);
  const fs::path out_dir = resolve_out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  const Histogram h1 = weight_histogram(net.layer1, bins);
  const Histogram h2 = weight_histogram(net.layer2, bins);
  std::ofstream os(out_dir / "histogram.csv", std::ios::binary);
  if (!os) throw DataError((out_dir / "histogram.csv").string(), 0, "cannot open for writing");
  write_histogram_csv(os, h1, h2);
  std::cout << "wrote " << (out_dir / "histogram.csv").string() << std::endl;
  return 0;
}

int run_fit_device(const std::string& input, int n_max, int max_iters) {
  const std::vector<MeasurementPoint<double>> pts = read_measurement_table(input);
  const FitResult<double> fit = fit_device(pts, n_max, max_iters);
  std::printf("g_min = %.8g\n", fit.params.g_min);
  std::printf("g_max = %.8g\n", fit.params.g_max);
  std::printf("k = %.8g\n", fit.params.k);
  std::printf("anl = %.8g\n", fit.params.anl);
  std::printf("residual_rms = %.8g\n", fit.residual_rms);
  std::printf("converged = %s (%d iterations)\n", fit.converged ? "true" : "false",
              fit.iterations);
  if (!fit.converged) {
    std::fprintf(stderr, "fit did not converge: %s\n", fit.message.c_str());
    return 3;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Online training simulator for analog resistive-synapse perceptrons"};
  app.require_subcommand(1);

  CommonOpts train_opts, sweep_opts, eval_opts, export_opts;
  std::vector<std::string> axis_specs;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string eval_snapshot, export_snapshot, fit_input;
  int export_bins = kDefaultHistogramBins;
  int fit_nmax = 0;
  int fit_iters = 200;

  CLI::App* fit_cmd = app.add_subcommand("fit-device", "fit device parameters to a pulse cycle");
  fit_cmd->add_option("--input", fit_input, "two-column (pulse_index, conductance) table")
      ->required();
  fit_cmd->add_option("--n-max", fit_nmax, "pulses per sweep (cycle spans 2*n_max)")->required();
  fit_cmd->add_option("--max-iters", fit_iters, "iteration budget");

  CLI::App* train_cmd = app.add_subcommand("train", "train one network from a config");
  add_common(train_cmd, train_opts, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "train a grid of configs");
  add_common(sweep_cmd, sweep_opts, true);
  sweep_cmd->add_option("--axis", axis_specs, "sweep axis, KEY=v1,v2,... (repeatable)")
      ->required();
  sweep_cmd->add_option("--jobs", jobs, "worker pool size");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a snapshot on the test split");
  eval_cmd->add_option("--snapshot", eval_snapshot, "network snapshot")->required();
  add_common(eval_cmd, eval_opts, false);

  CLI::App* export_cmd = app.add_subcommand("export", "export weight histograms from a snapshot");
  export_cmd->add_option("--snapshot", export_snapshot, "network snapshot")->required();
  export_cmd->add_option("--bins", export_bins, "histogram bin count");
  add_common(export_cmd, export_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return run_fit_device(fit_input, fit_nmax, fit_iters);
    if (train_cmd->parsed()) return run_train(train_opts);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opts, axis_specs, jobs);
    if (eval_cmd->parsed()) return run_eval(eval_snapshot, eval_opts);
    if (export_cmd->parsed()) return run_export(export_snapshot, export_bins, export_opts);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IdxError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace rramnet::cli
