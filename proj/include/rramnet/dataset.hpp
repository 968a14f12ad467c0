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

#ifndef RRAMNET_DATASET_HPP
#define RRAMNET_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rramnet/quantize.hpp"

namespace rramnet {

// Raw IDX payload: one image per column, pixel bytes untouched.
struct RawDataset {
  int image_rows = 0;
  int image_cols = 0;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> pixels;  // (rows*cols) x n
  std::vector<std::uint8_t> labels;

  Eigen::Index size() const { return pixels.cols(); }
};

// Parses the big-endian IDX pair (images magic 2051, labels magic 2049) and
// validates counts. Files may be gzip-compressed; the 2-byte signature is
// detected and the stream decompressed transparently.
RawDataset load_idx(const std::string& images_path, const std::string& labels_path);

enum class Split { Train, Test };

// Images normalized to [0, 1] and rounded onto the input neuron grid.
struct Dataset {
  Eigen::MatrixXd images;  // 784 x n, one column per image
  std::vector<std::uint8_t> labels;
  Split split = Split::Train;

  Eigen::Index size() const { return images.cols(); }
  Eigen::Index dim() const { return images.rows(); }
};

// Pixel byte -> value/255 -> nearest level of the [0, 1] input grid with
// `neuron_bits` precision (identity when rounding is disabled).
Dataset normalize_quantize(const RawDataset& raw, const QuantSpec<double>& quant, Split split);

// Deterministic epoch ordering: every epoch visits each sample exactly once,
// with the permutation pinned by (global seed, epoch index).
std::vector<int> epoch_permutation(int n_items, std::uint64_t global_seed, int epoch);

// Index batches over the epoch permutation; the final short batch is kept.
std::vector<std::vector<int>> minibatches(int n_items, int batch_size,
                                          std::uint64_t global_seed, int epoch);

}  // namespace rramnet

#endif  // RRAMNET_DATASET_HPP
