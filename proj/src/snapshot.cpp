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

#include "rramnet/snapshot.hpp"

#include <cstring>
#include <fstream>

#include "rramnet/errors.hpp"

namespace rramnet {

namespace {

constexpr char kMagic[8] = {'R', 'R', 'N', 'S', 'N', 'A', 'P', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw DataError(path, 0, "snapshot truncated");
  }
  return v;
}

std::uint64_t read_u64(std::istream& is, const std::string& path) {
  std::uint64_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw DataError(path, 0, "snapshot truncated");
  }
  return v;
}

void write_grid(std::ostream& os, const MatrixX<double>& g) {
  write_u32(os, static_cast<std::uint32_t>(g.rows()));
  write_u32(os, static_cast<std::uint32_t>(g.cols()));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double v = g(i, j);
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

MatrixX<double> read_grid(std::istream& is, const std::string& path) {
  const std::uint32_t rows = read_u32(is, path);
  const std::uint32_t cols = read_u32(is, path);
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
    throw DataError(path, 0, "snapshot grid has implausible dimensions");
  }
  MatrixX<double> g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      double v;
      if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError(path, 0, "snapshot truncated inside grid data");
      }
      g(i, j) = v;
    }
  }
  return g;
}

}  // namespace

void save_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError(path, 0, "cannot open snapshot for writing");
  os.write(kMagic, sizeof kMagic);
  write_u32(os, 1);  // version
  write_u64(os, snap.seed);
  write_u64(os, snap.steps);
  write_u32(os, static_cast<std::uint32_t>(snap.config_echo.size()));
  os.write(snap.config_echo.data(), static_cast<std::streamsize>(snap.config_echo.size()));
  write_grid(os, snap.g1);
  write_grid(os, snap.g2);
  if (!os) throw DataError(path, 0, "write failure while saving snapshot");
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError(path, 0, "cannot open snapshot '" + path + "'");
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw DataError(path, 0, "not a network snapshot (bad magic)");
  }
  const std::uint32_t version = read_u32(is, path);
  if (version != 1) {
    throw DataError(path, 0, "unsupported snapshot version " + std::to_string(version));
  }
  Snapshot snap;
  snap.seed = read_u64(is, path);
  snap.steps = read_u64(is, path);
  const std::uint32_t cfg_len = read_u32(is, path);
  snap.config_echo.resize(cfg_len);
  if (cfg_len > 0 && !is.read(snap.config_echo.data(), cfg_len)) {
    throw DataError(path, 0, "snapshot truncated inside config echo");
  }
  snap.g1 = read_grid(is, path);
  snap.g2 = read_grid(is, path);
  return snap;
}

Snapshot make_snapshot(const Network<double>& net, const ExperimentConfig& resolved,
                       std::uint64_t steps) {
  Snapshot snap;
  snap.config_echo = serialize_config(resolved);
  snap.seed = resolved.seed;
  snap.steps = steps;
  snap.g1 = net.layer1.g;
  snap.g2 = net.layer2.g;
  return snap;
}

Network<double> network_from_snapshot(const Snapshot& snap) {
  const ExperimentConfig cfg = parse_config_text(snap.config_echo, "snapshot config");
  validate(cfg);
  ExperimentConfig resolved = cfg;
  if (resolved.activation == ActivationKind::Relu && resolved.upper_bound == 0.0) {
    throw ConfigError("snapshot config", "relu upper bound missing from snapshot");
  }
  if (resolved.quant_enabled && resolved.backprop_bound == 0.0) {
    throw ConfigError("snapshot config", "backprop bound missing from snapshot");
  }
  const NetworkConfig<double> nc = make_network_config(resolved);
  if (snap.g1.rows() != nc.inputs || snap.g1.cols() != nc.hidden ||
      snap.g2.rows() != nc.hidden || snap.g2.cols() != nc.outputs) {
    throw ConfigError("snapshot", "grid dimensions disagree with embedded config");
  }
  Network<double> net = init_network(nc, 0);
  net.layer1.g = snap.g1;
  net.layer2.g = snap.g2;
  return net;
}

}  // namespace rramnet
