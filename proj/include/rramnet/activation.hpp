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

#ifndef RRAMNET_ACTIVATION_HPP
#define RRAMNET_ACTIVATION_HPP

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rramnet {

enum class ActivationKind { Sigmoid, Relu };

inline std::string to_string(ActivationKind k) {
  return k == ActivationKind::Sigmoid ? "sigmoid" : "relu";
}

inline ActivationKind activation_from_string(const std::string& s) {
  if (s == "sigmoid") return ActivationKind::Sigmoid;
  if (s == "relu") return ActivationKind::Relu;
  throw std::invalid_argument("unknown activation '" + s + "' (expected sigmoid or relu)");
}

// Activation with a parallel shift along the input axis. Relu additionally
// clips at `upper_bound` so its outputs stay representable by a bounded
// quantizer; the bound is ignored for sigmoid.
template <typename Scalar = double>
struct ActivationSpec {
  ActivationKind kind = ActivationKind::Sigmoid;
  Scalar shift = 0;
  Scalar upper_bound = 0;
};

template <typename Scalar>
Scalar activate(const ActivationSpec<Scalar>& a, Scalar x) {
  const Scalar z = x - a.shift;
  if (a.kind == ActivationKind::Sigmoid) {
    return Scalar(1) / (Scalar(1) + std::exp(-z));
  }
  return std::min(std::max(Scalar(0), z), a.upper_bound);
}

// Derivative of the activation at raw input x. The clipped relu has zero
// derivative both below the shift and at the clip region.
template <typename Scalar>
Scalar activate_derivative(const ActivationSpec<Scalar>& a, Scalar x) {
  const Scalar z = x - a.shift;
  if (a.kind == ActivationKind::Sigmoid) {
    const Scalar f = Scalar(1) / (Scalar(1) + std::exp(-z));
    return f * (Scalar(1) - f);
  }
  return (z > Scalar(0) && z < a.upper_bound) ? Scalar(1) : Scalar(0);
}

// Cutoff used by the threshold update scheme: values of magnitude below th
// are dropped, the boundary is kept.
template <typename Scalar>
Scalar apply_threshold(Scalar th, Scalar x) {
  return std::abs(x) >= th ? x : Scalar(0);
}

// Lazy elementwise expressions over Eigen operands.

template <typename Scalar, typename Derived>
auto activate(const ActivationSpec<Scalar>& a, const Eigen::MatrixBase<Derived>& x) {
  return x.unaryExpr([a](Scalar v) { return activate(a, v); });
}

template <typename Scalar, typename Derived>
auto activate_derivative(const ActivationSpec<Scalar>& a, const Eigen::MatrixBase<Derived>& x) {
  return x.unaryExpr([a](Scalar v) { return activate_derivative(a, v); });
}

template <typename Scalar, typename Derived>
auto apply_threshold(Scalar th, const Eigen::MatrixBase<Derived>& x) {
  return x.unaryExpr([th](Scalar v) { return apply_threshold(th, v); });
}

}  // namespace rramnet

#endif  // RRAMNET_ACTIVATION_HPP
