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

#ifndef RRAMNET_SNAPSHOT_HPP
#define RRAMNET_SNAPSHOT_HPP

#include <cstdint>
#include <string>

#include "rramnet/config.hpp"
#include "rramnet/network.hpp"

namespace rramnet {

// Versioned binary container for a trained network: the effective config
// echo, the RNG seed, the weight-update step counter, and both conductance
// grids in row-major order.
struct Snapshot {
  std::string config_echo;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  MatrixX<double> g1;
  MatrixX<double> g2;
};

void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

Snapshot make_snapshot(const Network<double>& net, const ExperimentConfig& resolved,
                       std::uint64_t steps);

// Rebuilds the network from the embedded config echo and the stored grids.
Network<double> network_from_snapshot(const Snapshot& snap);

}  // namespace rramnet

#endif  // RRAMNET_SNAPSHOT_HPP
