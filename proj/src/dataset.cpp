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

#include "rramnet/dataset.hpp"

#include <zlib.h>

#include <cstring>
#include <memory>
#include <stdexcept>

#include "rramnet/errors.hpp"
#include "rramnet/rng.hpp"

namespace rramnet {

namespace {

// gzread-backed reader; zlib handles plain files and gzip streams alike.
// Offsets are positions in the decompressed byte stream.
class IdxReader {
public:
  explicit IdxReader(const std::string& path) : path_(path) {
    file_ = gzopen(path.c_str(), "rb");
    if (file_ == nullptr) {
      throw IdxError(IdxError::Kind::OpenFailed, path, 0, "cannot open '" + path + "'");
    }
  }

  ~IdxReader() {
    if (file_ != nullptr) gzclose(file_);
  }

  IdxReader(const IdxReader&) = delete;
  IdxReader& operator=(const IdxReader&) = delete;

  void read_exact(void* dst, std::size_t len) {
    const int got = gzread(file_, dst, static_cast<unsigned>(len));
    if (got < 0 || static_cast<std::size_t>(got) != len) {
      throw IdxError(IdxError::Kind::Truncated, path_, offset_ + (got > 0 ? got : 0),
                     "'" + path_ + "' truncated at byte " +
                         std::to_string(offset_ + (got > 0 ? got : 0)));
    }
    offset_ += len;
  }

  std::uint32_t read_u32_be() {
    unsigned char b[4];
    read_exact(b, 4);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  }

  std::size_t offset() const { return offset_; }
  const std::string& path() const { return path_; }

  bool at_eof() {
    char probe;
    const int got = gzread(file_, &probe, 1);
    return got == 0;
  }

private:
  gzFile file_ = nullptr;
  std::string path_;
  std::size_t offset_ = 0;
};

constexpr std::uint32_t kImagesMagic = 2051;
constexpr std::uint32_t kLabelsMagic = 2049;

}  // namespace

RawDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  RawDataset out;

  {
    IdxReader rd(images_path);
    const std::uint32_t magic = rd.read_u32_be();
    if (magic != kImagesMagic) {
      throw IdxError(IdxError::Kind::BadMagic, images_path, 0,
                     "'" + images_path + "' has magic " + std::to_string(magic) +
                         ", expected " + std::to_string(kImagesMagic) + " (IDX images)");
    }
    const std::uint32_t count = rd.read_u32_be();
    const std::uint32_t rows = rd.read_u32_be();
    const std::uint32_t cols = rd.read_u32_be();
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) {
      throw IdxError(IdxError::Kind::BadMagic, images_path, 8,
                     "'" + images_path + "' declares implausible image size " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
    out.image_rows = static_cast<int>(rows);
    out.image_cols = static_cast<int>(cols);
    out.pixels.resize(static_cast<Eigen::Index>(rows) * cols, static_cast<Eigen::Index>(count));
    for (std::uint32_t i = 0; i < count; ++i) {
      rd.read_exact(out.pixels.col(static_cast<Eigen::Index>(i)).data(),
                    static_cast<std::size_t>(rows) * cols);
    }
  }

  {
    IdxReader rd(labels_path);
    const std::uint32_t magic = rd.read_u32_be();
    if (magic != kLabelsMagic) {
      throw IdxError(IdxError::Kind::BadMagic, labels_path, 0,
                     "'" + labels_path + "' has magic " + std::to_string(magic) +
                         ", expected " + std::to_string(kLabelsMagic) + " (IDX labels)");
    }
    const std::uint32_t count = rd.read_u32_be();
    if (static_cast<Eigen::Index>(count) != out.pixels.cols()) {
      throw IdxError(IdxError::Kind::CountMismatch, labels_path, 4,
                     "label count " + std::to_string(count) + " does not match image count " +
                         std::to_string(out.pixels.cols()));
    }
    out.labels.resize(count);
    if (count > 0) rd.read_exact(out.labels.data(), count);
  }

  return out;
}

Dataset normalize_quantize(const RawDataset& raw, const QuantSpec<double>& quant, Split split) {
  // The input grid is always [0, 1] regardless of the activation's forward
  // range; pixels are stored normalized by the 255 gray-level maximum.
  QuantSpec<double> input_q = quant;
  input_q.forward_lo = 0.0;
  input_q.forward_hi = 1.0;

  Dataset ds;
  ds.split = split;
  ds.labels = raw.labels;
  ds.images.resize(raw.pixels.rows(), raw.pixels.cols());
  for (Eigen::Index j = 0; j < raw.pixels.cols(); ++j) {
    for (Eigen::Index i = 0; i < raw.pixels.rows(); ++i) {
      const double v = static_cast<double>(raw.pixels(i, j)) / 255.0;
      ds.images(i, j) = quantize(input_q, v, QuantRange::Forward);
    }
  }
  return ds;
}

std::vector<int> epoch_permutation(int n_items, std::uint64_t global_seed, int epoch) {
  rng::Engine eng(rng::derive_seed(global_seed, rng::Stream::EpochShuffle,
                                   static_cast<std::uint64_t>(epoch)));
  return rng::permutation(n_items, eng);
}

std::vector<std::vector<int>> minibatches(int n_items, int batch_size,
                                          std::uint64_t global_seed, int epoch) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  const std::vector<int> order = epoch_permutation(n_items, global_seed, epoch);
  std::vector<std::vector<int>> batches;
  batches.reserve(static_cast<std::size_t>((n_items + batch_size - 1) / batch_size));
  for (int start = 0; start < n_items; start += batch_size) {
    const int stop = std::min(start + batch_size, n_items);
    batches.emplace_back(order.begin() + start, order.begin() + stop);
  }
  return batches;
}

}  // namespace rramnet
