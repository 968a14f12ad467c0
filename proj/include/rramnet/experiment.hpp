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

#ifndef RRAMNET_EXPERIMENT_HPP
#define RRAMNET_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rramnet/config.hpp"
#include "rramnet/dataset.hpp"
#include "rramnet/network.hpp"

namespace rramnet {

inline constexpr int kDefaultHistogramBins = 64;

struct EpochStats {
  int epoch = 0;
  double train_mse = 0;
  double test_accuracy = 0;     // percent
  double hidden_sparsity = 0;   // percent of exactly-zero hidden values
  double update_sparsity = 0;   // percent of zero entries in the pulse grids
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<long> counts;
};

struct ExperimentRecord {
  std::vector<EpochStats> epochs;
  Histogram hist_layer1;
  Histogram hist_layer2;
};

struct TrainOutput {
  Network<double> net;
  ExperimentRecord record;
  ExperimentConfig resolved;  // config with calibrated bounds filled in
  std::uint64_t steps = 0;    // weight-update (batch) count
};

// Resolved quantizer/activation bounds. When a bound is left at zero in the
// config it defaults from a full-precision pass over the leading
// `run.calibration_samples` training images: the maximum observed magnitude
// rounded up to the next power of two.
struct CalibratedBounds {
  double upper_bound = 0;
  double backprop_bound = 0;
};
CalibratedBounds calibrate_bounds(const ExperimentConfig& cfg, const Dataset& train_ds);

// Validates and fills unresolved bounds; the result reproduces the run when
// fed back through train().
ExperimentConfig resolve_config(const ExperimentConfig& cfg, const Dataset& train_ds);

// Minibatch online training: per batch, forward and backward every sample,
// sum the per-sample thresholded pulse products, round once, and update all
// synapses simultaneously. Metrics are recorded every run.eval_cadence
// epochs (and at the final epoch). Deterministic given the config seed.
TrainOutput train(const ExperimentConfig& cfg, const Dataset& train_ds, const Dataset& test_ds,
                  std::ostream* log = nullptr);

// Percent of test samples whose highest output (lowest index on ties)
// matches the label.
double evaluate(const Network<double>& net, const Dataset& ds);

// Percent of exactly-zero quantized hidden values over the first
// `max_samples` samples (0 = whole dataset).
double hidden_sparsity(const Network<double>& net, const Dataset& ds,
                       Eigen::Index max_samples = 0);

// Histogram of signed weights g - g_ref; edges span the representable
// weight range [-(g_max-g_min)/2, +(g_max-g_min)/2] exactly.
Histogram weight_histogram(const SynapseArray<double>& arr, int bins);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepCell {
  int run_id = 0;
  ExperimentConfig config;  // resolved per-cell config
  ExperimentRecord record;
  std::uint64_t steps = 0;
};

// Cartesian sweep over config keys. Each cell trains independently with a
// seed derived from (base seed, cell index); cells may run on a worker pool.
// Results come back ordered by run_id regardless of completion order.
std::vector<SweepCell> sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
                             const RawDataset& train_raw, const RawDataset& test_raw,
                             int jobs = 1, std::ostream* log = nullptr);

// results CSV: one row per recorded epoch per run, header mandatory, floats
// with 6 significant digits.
void write_results_csv(std::ostream& os, const std::vector<SweepCell>& cells);

// histogram CSV: bin_lo, bin_hi, count_layer1, count_layer2.
void write_histogram_csv(std::ostream& os, const Histogram& h1, const Histogram& h2);

}  // namespace rramnet

#endif  // RRAMNET_EXPERIMENT_HPP
