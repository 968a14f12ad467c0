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

#ifndef RRAMNET_CONFIG_HPP
#define RRAMNET_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "rramnet/activation.hpp"
#include "rramnet/network.hpp"

namespace rramnet {

// Flat key = value experiment description. Key namespace:
//   device.anl device.k device.weight_bits device.g_min device.g_max
//   net.activation net.s net.th net.eta net.upper_bound net.hidden
//   quant.neuron_bits quant.enabled quant.backprop_bound
//   run.epochs run.batch run.seed run.eval_cadence run.train_limit
//   run.calibration_samples
//   data.train_images data.train_labels data.test_images data.test_labels
//   out.dir
// Unknown keys are a hard error. device.anl = 0 selects the ideal-linear
// device; device.k pins the curvature exponent directly instead (the two are
// mutually exclusive). A zero net.upper_bound or quant.backprop_bound means
// "calibrate before training".
struct ExperimentConfig {
  // device
  double anl = 0.0;
  std::optional<double> k;
  int weight_bits = 8;
  double g_min = 0.0;
  double g_max = 1.0;
  // net
  ActivationKind activation = ActivationKind::Sigmoid;
  double shift = 0.0;
  double threshold = 0.0;
  double eta = 1.0;
  double upper_bound = 0.0;
  int hidden = 300;
  // quant
  int neuron_bits = 8;
  bool quant_enabled = true;
  double backprop_bound = 0.0;
  // run
  int epochs = 15;
  int batch = 50;
  std::uint64_t seed = 1;
  int eval_cadence = 1;
  int train_limit = 0;
  int calibration_samples = 1000;
  // data
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  // out
  std::string out_dir;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config_file(const std::string& path);

// Parses the serialized echo produced by serialize_config.
ExperimentConfig parse_config_text(const std::string& text, const std::string& context);

// Applies one KEY=VALUE override; `context` names the origin for messages.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& context);

// Domain checks across all fields; throws ConfigError on violation.
void validate(const ExperimentConfig& cfg);

// Full echo: every key with its current value, fixed order, floats printed
// with round-trip precision. parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

// Device parameters implied by the config (anl = 0 -> ideal linear).
DeviceParams<double> make_device(const ExperimentConfig& cfg);

// Network construction parameters. Requires resolved bounds: for relu the
// upper bound must already be positive, and when rounding is enabled the
// backprop bound must be positive.
NetworkConfig<double> make_network_config(const ExperimentConfig& cfg);

}  // namespace rramnet

#endif  // RRAMNET_CONFIG_HPP
