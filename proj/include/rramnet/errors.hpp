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

#ifndef RRAMNET_ERRORS_HPP
#define RRAMNET_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rramnet {

// Structural problem in an IDX data file. `offset` is the byte position in
// the (decompressed) stream where the problem was detected.
class IdxError : public std::runtime_error {
public:
  enum class Kind { OpenFailed, BadMagic, Truncated, CountMismatch };

  IdxError(Kind kind, std::string path, std::size_t offset, const std::string& what)
      : std::runtime_error(what), kind(kind), path(std::move(path)), offset(offset) {}

  Kind kind;
  std::string path;
  std::size_t offset;
};

// Malformed configuration file, unknown key, or a value outside its domain.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string context, const std::string& what)
      : std::runtime_error(context.empty() ? what : context + ": " + what),
        context(std::move(context)) {}

  std::string context;  // file path or "override KEY=VALUE"
};

// Malformed plain-text data table (device measurements, CSV inputs).
class DataError : public std::runtime_error {
public:
  DataError(std::string path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        path(std::move(path)), line(line) {}

  std::string path;
  int line;
};

// Non-finite value encountered mid-training; training aborts immediately.
class NumericalError : public std::runtime_error {
public:
  NumericalError(int epoch, int batch, std::string layer)
      : std::runtime_error("non-finite value during training (epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch) + ", " + layer + ")"),
        epoch(epoch), batch(batch), layer(std::move(layer)) {}

  int epoch;
  int batch;
  std::string layer;
};

}  // namespace rramnet

#endif  // RRAMNET_ERRORS_HPP
