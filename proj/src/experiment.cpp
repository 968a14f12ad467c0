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

#include "rramnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "rramnet/errors.hpp"
#include "rramnet/rng.hpp"

namespace rramnet {

namespace {

constexpr Eigen::Index kEvalChunk = 512;

double next_pow2(double x) {
  if (!(x > 0.0)) return 1.0;
  return std::exp2(std::ceil(std::log2(x)));
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& src, const std::vector<int>& idx) {
  Eigen::MatrixXd out(src.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = src.col(idx[c]);
  }
  return out;
}

Eigen::MatrixXd one_hot_targets(const std::vector<std::uint8_t>& labels,
                                const std::vector<int>& idx, Eigen::Index classes) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(classes, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    t(labels[static_cast<std::size_t>(idx[c])], static_cast<Eigen::Index>(c)) = 1.0;
  }
  return t;
}

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

int effective_train_count(const ExperimentConfig& cfg, const Dataset& train_ds) {
  const int n = static_cast<int>(train_ds.size());
  if (cfg.train_limit > 0) return std::min(cfg.train_limit, n);
  return n;
}

void check_dataset(const Dataset& ds, const char* name) {
  if (ds.dim() != 784) {
    throw std::invalid_argument(std::string(name) + " dataset has input dimension " +
                                std::to_string(ds.dim()) + ", expected 784");
  }
  if (static_cast<Eigen::Index>(ds.labels.size()) != ds.size()) {
    throw std::invalid_argument(std::string(name) + " dataset image/label count mismatch");
  }
}

std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

CalibratedBounds calibrate_bounds(const ExperimentConfig& cfg, const Dataset& train_ds) {
  // Probe with the same seed and initial conductances as the real run, but
  // rounding off and the relu unclipped, so the measured ranges are the
  // full-precision signal ranges the quantizers must cover.
  NetworkConfig<double> nc;
  nc.inputs = 784;
  nc.hidden = cfg.hidden;
  nc.outputs = 10;
  nc.device = make_device(cfg);
  nc.activation.kind = cfg.activation;
  nc.activation.shift = cfg.shift;
  nc.activation.upper_bound = cfg.upper_bound > 0.0
                                  ? cfg.upper_bound
                                  : std::numeric_limits<double>::infinity();
  nc.quant.enabled = false;
  nc.quant.backprop_bound = 1.0;  // unused while disabled
  nc.learning_rate = cfg.eta;
  nc.threshold = 0.0;
  Network<double> net =
      init_network(nc, rng::derive_seed(cfg.seed, rng::Stream::NetworkInit, 0));

  const Eigen::Index n =
      std::min<Eigen::Index>(cfg.calibration_samples, effective_train_count(cfg, train_ds));
  double fw_max = 0.0;
  double bp_max = 0.0;
  for (Eigen::Index start = 0; start < n; start += kEvalChunk) {
    const Eigen::Index len = std::min(kEvalChunk, n - start);
    const Eigen::MatrixXd x = train_ds.images.middleCols(start, len);
    ForwardTrace<double> tr = forward(net, x);
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(net.outputs(), len);
    for (Eigen::Index c = 0; c < len; ++c) {
      targets(train_ds.labels[static_cast<std::size_t>(start + c)], c) = 1.0;
    }
    BackpropSignals<double> bp = backward(net, tr, targets);
    fw_max = std::max({fw_max, tr.h.maxCoeff(), tr.o.maxCoeff()});
    bp_max = std::max({bp_max, bp.o_bp.cwiseAbs().maxCoeff(), bp.h_bp.cwiseAbs().maxCoeff()});
  }

  CalibratedBounds out;
  out.upper_bound = cfg.upper_bound > 0.0 ? cfg.upper_bound : next_pow2(fw_max);
  out.backprop_bound = cfg.backprop_bound > 0.0 ? cfg.backprop_bound : next_pow2(bp_max);
  return out;
}

ExperimentConfig resolve_config(const ExperimentConfig& cfg, const Dataset& train_ds) {
  validate(cfg);
  ExperimentConfig out = cfg;
  const bool need_ub = cfg.activation == ActivationKind::Relu && cfg.upper_bound == 0.0;
  const bool need_bp = cfg.quant_enabled && cfg.backprop_bound == 0.0;
  if (!cfg.quant_enabled) {
    // Reference mode: the relu stays unbounded unless a bound was given.
    if (need_ub) out.upper_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  if (need_ub || need_bp) {
    const CalibratedBounds b = calibrate_bounds(cfg, train_ds);
    if (need_ub) out.upper_bound = b.upper_bound;
    if (need_bp) out.backprop_bound = b.backprop_bound;
  }
  return out;
}

TrainOutput train(const ExperimentConfig& cfg0, const Dataset& train_ds, const Dataset& test_ds,
                  std::ostream* log) {
  check_dataset(train_ds, "train");
  check_dataset(test_ds, "test");
  const ExperimentConfig cfg = resolve_config(cfg0, train_ds);
  const NetworkConfig<double> nc = make_network_config(cfg);

  TrainOutput out;
  out.resolved = cfg;
  out.net = init_network(nc, rng::derive_seed(cfg.seed, rng::Stream::NetworkInit, 0));
  Network<double>& net = out.net;

  const int n = effective_train_count(cfg, train_ds);
  const Eigen::Index layer1_entries = net.layer1.g.size();
  const Eigen::Index layer2_entries = net.layer2.g.size();

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::vector<std::vector<int>> batches = minibatches(n, cfg.batch, cfg.seed, epoch);
    double se_sum = 0.0;
    long long n_seen = 0;
    long long hidden_zeros = 0;
    long long upd_zeros = 0;
    long long upd_total = 0;

    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      const std::vector<int>& batch = batches[bi];
      const Eigen::MatrixXd x = gather_columns(train_ds.images, batch);
      const Eigen::MatrixXd targets = one_hot_targets(train_ds.labels, batch, net.outputs());

      const ForwardTrace<double> tr = forward(net, x);
      if (!tr.s_h.allFinite() || !tr.h.allFinite()) {
        throw NumericalError(epoch, static_cast<int>(bi), "layer1 forward");
      }
      if (!tr.s_o.allFinite() || !tr.o.allFinite()) {
        throw NumericalError(epoch, static_cast<int>(bi), "layer2 forward");
      }
      const BackpropSignals<double> bp = backward(net, tr, targets);
      if (!bp.o_bp.allFinite() || !bp.h_bp.allFinite()) {
        throw NumericalError(epoch, static_cast<int>(bi), "backprop");
      }

      se_sum += (targets - tr.o).squaredNorm();
      n_seen += static_cast<long long>(batch.size());
      hidden_zeros += (tr.h.array() == 0.0).count();

      const PulseUpdates<> upd = compute_pulse_updates(net, tr, bp);
      upd_zeros += (upd.dn1.array() == 0).count() + (upd.dn2.array() == 0).count();
      upd_total += layer1_entries + layer2_entries;
      update_weights(net, upd);
      ++out.steps;
    }

    if (epoch % cfg.eval_cadence == 0 || epoch == cfg.epochs) {
      EpochStats st;
      st.epoch = epoch;
      st.train_mse = se_sum / (static_cast<double>(n_seen) * static_cast<double>(net.outputs()));
      st.hidden_sparsity = 100.0 * static_cast<double>(hidden_zeros) /
                           (static_cast<double>(n_seen) * static_cast<double>(net.hidden()));
      st.update_sparsity =
          100.0 * static_cast<double>(upd_zeros) / static_cast<double>(upd_total);
      st.test_accuracy = evaluate(net, test_ds);
      out.record.epochs.push_back(st);
      if (log != nullptr) {
        (*log) << "epoch " << st.epoch << ": mse=" << format_g6(st.train_mse)
               << " acc=" << format_g6(st.test_accuracy) << "%"
               << " hidden_sparsity=" << format_g6(st.hidden_sparsity) << "%"
               << " update_sparsity=" << format_g6(st.update_sparsity) << "%" << std::endl;
      }
    }
  }

  out.record.hist_layer1 = weight_histogram(net.layer1, kDefaultHistogramBins);
  out.record.hist_layer2 = weight_histogram(net.layer2, kDefaultHistogramBins);
  return out;
}

double evaluate(const Network<double>& net, const Dataset& ds) {
  check_dataset(ds, "eval");
  const Eigen::Index n = ds.size();
  long correct = 0;
  for (Eigen::Index start = 0; start < n; start += kEvalChunk) {
    const Eigen::Index len = std::min(kEvalChunk, n - start);
    const Eigen::MatrixXd x = ds.images.middleCols(start, len);
    const ForwardTrace<double> tr = forward(net, x);
    for (Eigen::Index c = 0; c < len; ++c) {
      if (argmax_lowest(tr.o.col(c)) == ds.labels[static_cast<std::size_t>(start + c)]) {
        ++correct;
      }
    }
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(n);
}

double hidden_sparsity(const Network<double>& net, const Dataset& ds, Eigen::Index max_samples) {
  check_dataset(ds, "sparsity");
  const Eigen::Index n = max_samples > 0 ? std::min(max_samples, ds.size()) : ds.size();
  long long zeros = 0;
  for (Eigen::Index start = 0; start < n; start += kEvalChunk) {
    const Eigen::Index len = std::min(kEvalChunk, n - start);
    const Eigen::MatrixXd x = ds.images.middleCols(start, len);
    const ForwardTrace<double> tr = forward(net, x);
    zeros += (tr.h.array() == 0.0).count();
  }
  return 100.0 * static_cast<double>(zeros) /
         (static_cast<double>(n) * static_cast<double>(net.hidden()));
}

Histogram weight_histogram(const SynapseArray<double>& arr, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  const double half = arr.device.range() / 2.0;
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    h.edges[static_cast<std::size_t>(i)] =
        -half + (2.0 * half) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.edges.front() = -half;
  h.edges.back() = half;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (Eigen::Index j = 0; j < arr.cols(); ++j) {
    for (Eigen::Index i = 0; i < arr.rows(); ++i) {
      const double w = arr.g(i, j) - arr.g_ref;
      int idx = static_cast<int>(std::floor((w + half) / (2.0 * half) * bins));
      idx = std::clamp(idx, 0, bins - 1);
      ++h.counts[static_cast<std::size_t>(idx)];
    }
  }
  return h;
}

std::vector<SweepCell> sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
                             const RawDataset& train_raw, const RawDataset& test_raw,
                             int jobs, std::ostream* log) {
  for (const SweepAxis& ax : axes) {
    if (ax.values.empty()) throw ConfigError("sweep", "axis '" + ax.key + "' has no values");
  }
  if (jobs < 1) jobs = 1;

  // Cartesian expansion, rightmost axis fastest.
  std::size_t n_cells = 1;
  for (const SweepAxis& ax : axes) n_cells *= ax.values.size();
  std::vector<ExperimentConfig> configs;
  configs.reserve(n_cells);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    ExperimentConfig cfg = base;
    std::size_t rem = cell;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const SweepAxis& ax = axes[a];
      const std::size_t vi = rem % ax.values.size();
      rem /= ax.values.size();
      apply_override(cfg, ax.key, ax.values[vi], "sweep axis");
    }
    cfg.seed = rng::derive_seed(base.seed, rng::Stream::SweepCell,
                                static_cast<std::uint64_t>(cell));
    validate(cfg);
    configs.push_back(std::move(cfg));
  }

  // Quantized datasets shared across cells with equal input quantizers.
  std::map<std::pair<int, bool>, std::pair<Dataset, Dataset>> data_cache;
  for (const ExperimentConfig& cfg : configs) {
    const std::pair<int, bool> key{cfg.neuron_bits, cfg.quant_enabled};
    if (data_cache.count(key) == 0) {
      QuantSpec<double> q;
      q.neuron_bits = cfg.neuron_bits;
      q.enabled = cfg.quant_enabled;
      data_cache.emplace(key, std::make_pair(normalize_quantize(train_raw, q, Split::Train),
                                             normalize_quantize(test_raw, q, Split::Test)));
    }
  }

  std::vector<SweepCell> cells(n_cells);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_cells) return;
      const ExperimentConfig& cfg = configs[i];
      const auto& data = data_cache.at({cfg.neuron_bits, cfg.quant_enabled});
      TrainOutput res = train(cfg, data.first, data.second, nullptr);
      cells[i].run_id = static_cast<int>(i);
      cells[i].config = std::move(res.resolved);
      cells[i].record = std::move(res.record);
      cells[i].steps = res.steps;
      if (log != nullptr) {
        std::lock_guard<std::mutex> lk(log_mutex);
        const EpochStats* last =
            cells[i].record.epochs.empty() ? nullptr : &cells[i].record.epochs.back();
        (*log) << "cell " << i << "/" << n_cells << " done";
        if (last != nullptr) (*log) << " acc=" << format_g6(last->test_accuracy) << "%";
        (*log) << std::endl;
      }
    }
  };

  const int n_workers = static_cast<int>(std::min<std::size_t>(n_cells, jobs));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return cells;
}

void write_results_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  os << "run_id,anl,activation,s,th,weight_bits,neuron_bits,eta,batch,seed,epoch,"
        "train_mse,test_acc,hidden_sparsity,update_sparsity\n";
  for (const SweepCell& cell : cells) {
    const ExperimentConfig& c = cell.config;
    const double anl = make_device(c).anl;
    for (const EpochStats& st : cell.record.epochs) {
      os << cell.run_id << ',' << format_g6(anl) << ',' << to_string(c.activation) << ','
         << format_g6(c.shift) << ',' << format_g6(c.threshold) << ',' << c.weight_bits << ','
         << c.neuron_bits << ',' << format_g6(c.eta) << ',' << c.batch << ',' << c.seed << ','
         << st.epoch << ',' << format_g6(st.train_mse) << ',' << format_g6(st.test_accuracy)
         << ',' << format_g6(st.hidden_sparsity) << ',' << format_g6(st.update_sparsity)
         << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& os, const Histogram& h1, const Histogram& h2) {
  if (h1.counts.size() != h2.counts.size()) {
    throw std::invalid_argument("layer histograms have different bin counts");
  }
  os << "bin_lo,bin_hi,count_layer1,count_layer2\n";
  for (std::size_t i = 0; i < h1.counts.size(); ++i) {
    os << format_g6(h1.edges[i]) << ',' << format_g6(h1.edges[i + 1]) << ',' << h1.counts[i]
       << ',' << h2.counts[i] << '\n';
  }
}

}  // namespace rramnet
