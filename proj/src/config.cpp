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

#include "rramnet/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rramnet/errors.hpp"

namespace rramnet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx, "'" + v + "' is not a number");
  }
  if (pos != v.size()) throw ConfigError(ctx, "'" + v + "' is not a number");
  return out;
}

long long parse_int(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx, "'" + v + "' is not an integer");
  }
  if (pos != v.size()) throw ConfigError(ctx, "'" + v + "' is not an integer");
  return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  unsigned long long out;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx, "'" + v + "' is not an unsigned integer");
  }
  if (pos != v.size()) throw ConfigError(ctx, "'" + v + "' is not an unsigned integer");
  return out;
}

bool parse_bool(const std::string& v, const std::string& ctx) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(ctx, "'" + v + "' is not a boolean (use true/false)");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& context) {
  const std::string ctx = context + " (" + key + ")";
  if (key == "device.anl") {
    cfg.anl = parse_double(value, ctx);
  } else if (key == "device.k") {
    cfg.k = parse_double(value, ctx);
  } else if (key == "device.weight_bits") {
    cfg.weight_bits = static_cast<int>(parse_int(value, ctx));
  } else if (key == "device.g_min") {
    cfg.g_min = parse_double(value, ctx);
  } else if (key == "device.g_max") {
    cfg.g_max = parse_double(value, ctx);
  } else if (key == "net.activation") {
    try {
      cfg.activation = activation_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ctx, e.what());
    }
  } else if (key == "net.s") {
    cfg.shift = parse_double(value, ctx);
  } else if (key == "net.th") {
    cfg.threshold = parse_double(value, ctx);
  } else if (key == "net.eta") {
    cfg.eta = parse_double(value, ctx);
  } else if (key == "net.upper_bound") {
    cfg.upper_bound = parse_double(value, ctx);
  } else if (key == "net.hidden") {
    cfg.hidden = static_cast<int>(parse_int(value, ctx));
  } else if (key == "quant.neuron_bits") {
    cfg.neuron_bits = static_cast<int>(parse_int(value, ctx));
  } else if (key == "quant.enabled") {
    cfg.quant_enabled = parse_bool(value, ctx);
  } else if (key == "quant.backprop_bound") {
    cfg.backprop_bound = parse_double(value, ctx);
  } else if (key == "run.epochs") {
    cfg.epochs = static_cast<int>(parse_int(value, ctx));
  } else if (key == "run.batch") {
    cfg.batch = static_cast<int>(parse_int(value, ctx));
  } else if (key == "run.seed") {
    cfg.seed = parse_u64(value, ctx);
  } else if (key == "run.eval_cadence") {
    cfg.eval_cadence = static_cast<int>(parse_int(value, ctx));
  } else if (key == "run.train_limit") {
    cfg.train_limit = static_cast<int>(parse_int(value, ctx));
  } else if (key == "run.calibration_samples") {
    cfg.calibration_samples = static_cast<int>(parse_int(value, ctx));
  } else if (key == "data.train_images") {
    cfg.train_images = value;
  } else if (key == "data.train_labels") {
    cfg.train_labels = value;
  } else if (key == "data.test_images") {
    cfg.test_images = value;
  } else if (key == "data.test_labels") {
    cfg.test_labels = value;
  } else if (key == "out.dir") {
    cfg.out_dir = value;
  } else {
    throw ConfigError(context, "unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& context) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(context + ":" + std::to_string(lineno), "expected KEY = VALUE");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(context + ":" + std::to_string(lineno), "empty key");
    }
    apply_override(cfg, key, value, context + ":" + std::to_string(lineno));
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError("config", what); };
  if (cfg.k.has_value() && cfg.anl != 0.0) {
    fail("set device.anl or device.k, not both");
  }
  if (!cfg.k.has_value() && (cfg.anl < 0.0 || cfg.anl >= 1.0)) {
    fail("device.anl must lie in [0, 1)");
  }
  if (cfg.weight_bits < 1 || cfg.weight_bits > 16) fail("device.weight_bits must be in [1, 16]");
  if (!(cfg.g_max > cfg.g_min)) fail("device.g_max must exceed device.g_min");
  if (!(cfg.eta >= 0.0)) fail("net.eta must be >= 0");
  if (!(cfg.threshold >= 0.0)) fail("net.th must be >= 0");
  if (cfg.upper_bound < 0.0) fail("net.upper_bound must be >= 0 (0 = calibrate)");
  if (cfg.hidden < 1) fail("net.hidden must be positive");
  if (cfg.neuron_bits < 1 || cfg.neuron_bits > 16) fail("quant.neuron_bits must be in [1, 16]");
  if (cfg.backprop_bound < 0.0) fail("quant.backprop_bound must be >= 0 (0 = calibrate)");
  if (cfg.epochs < 0) fail("run.epochs must be >= 0");
  if (cfg.batch < 1) fail("run.batch must be >= 1");
  if (cfg.eval_cadence < 1) fail("run.eval_cadence must be >= 1");
  if (cfg.train_limit < 0) fail("run.train_limit must be >= 0");
  if (cfg.calibration_samples < 1) fail("run.calibration_samples must be >= 1");
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "device.anl = " << format_double(cfg.anl) << "\n";
  if (cfg.k.has_value()) os << "device.k = " << format_double(*cfg.k) << "\n";
  os << "device.weight_bits = " << cfg.weight_bits << "\n";
  os << "device.g_min = " << format_double(cfg.g_min) << "\n";
  os << "device.g_max = " << format_double(cfg.g_max) << "\n";
  os << "net.activation = " << to_string(cfg.activation) << "\n";
  os << "net.s = " << format_double(cfg.shift) << "\n";
  os << "net.th = " << format_double(cfg.threshold) << "\n";
  os << "net.eta = " << format_double(cfg.eta) << "\n";
  os << "net.upper_bound = " << format_double(cfg.upper_bound) << "\n";
  os << "net.hidden = " << cfg.hidden << "\n";
  os << "quant.neuron_bits = " << cfg.neuron_bits << "\n";
  os << "quant.enabled = " << (cfg.quant_enabled ? "true" : "false") << "\n";
  os << "quant.backprop_bound = " << format_double(cfg.backprop_bound) << "\n";
  os << "run.epochs = " << cfg.epochs << "\n";
  os << "run.batch = " << cfg.batch << "\n";
  os << "run.seed = " << cfg.seed << "\n";
  os << "run.eval_cadence = " << cfg.eval_cadence << "\n";
  os << "run.train_limit = " << cfg.train_limit << "\n";
  os << "run.calibration_samples = " << cfg.calibration_samples << "\n";
  os << "data.train_images = " << cfg.train_images << "\n";
  os << "data.train_labels = " << cfg.train_labels << "\n";
  os << "data.test_images = " << cfg.test_images << "\n";
  os << "data.test_labels = " << cfg.test_labels << "\n";
  os << "out.dir = " << cfg.out_dir << "\n";
  return os.str();
}

DeviceParams<double> make_device(const ExperimentConfig& cfg) {
  const int n_max = pulses_for_bits(cfg.weight_bits);
  if (cfg.k.has_value()) return DeviceParams<double>::from_k(cfg.g_min, cfg.g_max, n_max, *cfg.k);
  if (cfg.anl == 0.0) return DeviceParams<double>::ideal_linear(cfg.g_min, cfg.g_max, n_max);
  return DeviceParams<double>::from_anl(cfg.g_min, cfg.g_max, n_max, cfg.anl);
}

NetworkConfig<double> make_network_config(const ExperimentConfig& cfg) {
  NetworkConfig<double> nc;
  nc.inputs = 784;
  nc.hidden = cfg.hidden;
  nc.outputs = 10;
  nc.device = make_device(cfg);
  nc.activation.kind = cfg.activation;
  nc.activation.shift = cfg.shift;
  nc.activation.upper_bound = cfg.upper_bound;
  nc.quant.neuron_bits = cfg.neuron_bits;
  nc.quant.enabled = cfg.quant_enabled;
  nc.quant.backprop_bound = cfg.backprop_bound;
  if (cfg.activation == ActivationKind::Sigmoid) {
    nc.quant.forward_lo = 0.0;
    nc.quant.forward_hi = 1.0;
  } else {
    nc.quant.forward_lo = 0.0;
    nc.quant.forward_hi = cfg.upper_bound;
  }
  nc.learning_rate = cfg.eta;
  nc.threshold = cfg.threshold;
  if (cfg.activation == ActivationKind::Relu && !(cfg.upper_bound > 0.0)) {
    throw ConfigError("config", "relu upper bound unresolved; calibrate or set net.upper_bound");
  }
  if (cfg.quant_enabled && !(cfg.backprop_bound > 0.0)) {
    throw ConfigError("config",
                      "backprop bound unresolved; calibrate or set quant.backprop_bound");
  }
  return nc;
}

}  // namespace rramnet
