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

#ifndef RRAMNET_QUANTIZE_HPP
#define RRAMNET_QUANTIZE_HPP

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace rramnet {

enum class QuantRange { Forward, Backprop };

// Finite-precision neuron rounding. Forward values quantize onto an
// endpoint-inclusive uniform grid over [forward_lo, forward_hi], backprop
// values onto the symmetric grid over [-backprop_bound, backprop_bound];
// both use 2^neuron_bits levels. Disabled means full precision everywhere.
template <typename Scalar = double>
struct QuantSpec {
  int neuron_bits = 8;
  Scalar forward_lo = 0;
  Scalar forward_hi = 1;
  Scalar backprop_bound = 0;
  bool enabled = true;

  long levels() const { return 1L << neuron_bits; }
};

// Clamp to the range, then round to the nearest grid level, ties away from
// zero. An exact zero input always stays zero when the range admits it: a
// zero signal carries no pulses, and the symmetric backprop grid with an
// even level count has no zero level of its own.
template <typename Scalar>
Scalar quantize(const QuantSpec<Scalar>& q, Scalar x, QuantRange which) {
  if (!q.enabled) return x;
  Scalar lo, hi;
  if (which == QuantRange::Forward) {
    lo = q.forward_lo;
    hi = q.forward_hi;
  } else {
    lo = -q.backprop_bound;
    hi = q.backprop_bound;
  }
  if (!(hi > lo)) throw std::invalid_argument("quantizer range is empty");
  if (x == Scalar(0) && lo <= Scalar(0) && Scalar(0) <= hi) return Scalar(0);
  x = std::min(std::max(x, lo), hi);
  const long levels = q.levels();
  const Scalar step = (hi - lo) / static_cast<Scalar>(levels - 1);
  const Scalar pos = (x - lo) / step;
  const Scalar fl = std::floor(pos);
  const Scalar frac = pos - fl;
  long idx = static_cast<long>(fl);
  if (frac > Scalar(0.5)) {
    ++idx;
  } else if (frac == Scalar(0.5)) {
    if (x > Scalar(0)) ++idx;  // tie: pick the level of larger magnitude
  }
  idx = std::min(std::max(idx, 0L), levels - 1);
  return lo + static_cast<Scalar>(idx) * step;
}

template <typename Scalar, typename Derived>
auto quantize(const QuantSpec<Scalar>& q, const Eigen::MatrixBase<Derived>& x,
              QuantRange which) {
  return x.unaryExpr([q, which](Scalar v) { return quantize(q, v, which); });
}

}  // namespace rramnet

#endif  // RRAMNET_QUANTIZE_HPP
