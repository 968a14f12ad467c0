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

#include "rramnet/measurements.hpp"

#include <fstream>
#include <sstream>

#include "rramnet/errors.hpp"

namespace rramnet {

std::vector<MeasurementPoint<double>> read_measurement_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open measurement table '" + path + "'");

  std::vector<MeasurementPoint<double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    double idx, g;
    if (!(fields >> idx)) continue;  // blank or comment-only line
    if (!(fields >> g)) {
      throw DataError(path, lineno, "expected two columns (pulse_index, conductance)");
    }
    double extra;
    if (fields >> extra) {
      throw DataError(path, lineno, "expected exactly two columns, found more");
    }
    pts.push_back({idx, g});
  }
  if (pts.empty()) throw DataError(path, lineno, "no data points in measurement table");
  return pts;
}

}  // namespace rramnet
