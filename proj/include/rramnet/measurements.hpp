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

#ifndef RRAMNET_MEASUREMENTS_HPP
#define RRAMNET_MEASUREMENTS_HPP

#include <string>
#include <vector>

#include "rramnet/device_fit.hpp"

namespace rramnet {

// Two-column plain-text table of (pulse_index, conductance) points, comma or
// whitespace separated, with '#' comments. Pulse indices follow the cycle
// convention of MeasurementPoint.
std::vector<MeasurementPoint<double>> read_measurement_table(const std::string& path);

}  // namespace rramnet

#endif  // RRAMNET_MEASUREMENTS_HPP
