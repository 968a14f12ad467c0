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

#ifndef RRAMNET_NETWORK_HPP
#define RRAMNET_NETWORK_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rramnet/activation.hpp"
#include "rramnet/device.hpp"
#include "rramnet/quantize.hpp"
#include "rramnet/rng.hpp"

namespace rramnet {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatrixXl = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

// One fully-connected crossbar layer: a grid of conductances plus the
// reference conductance of the dummy column. Signed weights are read as
// g - g_ref, with g_ref fixed at the window midpoint so the weight range
// is symmetric.
template <typename Scalar = double>
struct SynapseArray {
  MatrixX<Scalar> g;  // rows = pre neurons, cols = post neurons
  Scalar g_ref = Scalar(0.5);
  DeviceParams<Scalar> device;

  static SynapseArray constant(Eigen::Index rows, Eigen::Index cols,
                               const DeviceParams<Scalar>& dev, Scalar g0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("synapse array dimensions must be positive");
    if (!(g0 >= dev.g_min) || !(g0 <= dev.g_max)) {
      throw std::out_of_range("initial conductance outside device window");
    }
    SynapseArray arr;
    arr.g = MatrixX<Scalar>::Constant(rows, cols, g0);
    arr.g_ref = dev.g_ref();
    arr.device = dev;
    return arr;
  }

  // Conductances i.i.d. uniform over the device window, drawn row-major so
  // a seed pins the exact grid.
  static SynapseArray uniform(Eigen::Index rows, Eigen::Index cols,
                              const DeviceParams<Scalar>& dev, rng::Engine& eng) {
    SynapseArray arr = constant(rows, cols, dev, dev.g_min);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        arr.g(i, j) = static_cast<Scalar>(
            eng.uniform(static_cast<double>(dev.g_min), static_cast<double>(dev.g_max)));
      }
    }
    return arr;
  }

  Eigen::Index rows() const { return g.rows(); }
  Eigen::Index cols() const { return g.cols(); }

  Scalar weight(Eigen::Index i, Eigen::Index j) const {
    if (i < 0 || i >= g.rows() || j < 0 || j >= g.cols()) {
      throw std::out_of_range("synapse index out of range");
    }
    return g(i, j) - g_ref;
  }

  // Signed weight matrix as a lazy expression.
  auto weights() const { return (g.array() - g_ref).matrix(); }
};

template <typename Scalar = double>
struct NetworkConfig {
  Eigen::Index inputs = 784;
  Eigen::Index hidden = 300;
  Eigen::Index outputs = 10;
  DeviceParams<Scalar> device;
  ActivationSpec<Scalar> activation;
  QuantSpec<Scalar> quant;
  Scalar learning_rate = 1;
  Scalar threshold = 0;
};

// Two-layer perceptron on crossbar arrays. Biases are identically zero and
// never updated; both layers share one activation spec.
template <typename Scalar = double>
struct Network {
  SynapseArray<Scalar> layer1;
  SynapseArray<Scalar> layer2;
  ActivationSpec<Scalar> activation;
  QuantSpec<Scalar> quant;
  Scalar learning_rate = 1;
  Scalar threshold = 0;

  Eigen::Index inputs() const { return layer1.rows(); }
  Eigen::Index hidden() const { return layer1.cols(); }
  Eigen::Index outputs() const { return layer2.cols(); }
};

template <typename Scalar>
Network<Scalar> init_network(const NetworkConfig<Scalar>& cfg, std::uint64_t seed) {
  if (cfg.inputs < 1 || cfg.hidden < 1 || cfg.outputs < 1) {
    throw std::invalid_argument("network dimensions must be positive");
  }
  if (cfg.activation.kind == ActivationKind::Relu && !(cfg.activation.upper_bound > Scalar(0))) {
    throw std::invalid_argument("relu requires a positive upper bound");
  }
  if (!(cfg.learning_rate >= Scalar(0))) throw std::invalid_argument("learning rate must be >= 0");
  if (!(cfg.threshold >= Scalar(0))) throw std::invalid_argument("threshold must be >= 0");
  rng::Engine eng(seed);
  Network<Scalar> net;
  net.layer1 = SynapseArray<Scalar>::uniform(cfg.inputs, cfg.hidden, cfg.device, eng);
  net.layer2 = SynapseArray<Scalar>::uniform(cfg.hidden, cfg.outputs, cfg.device, eng);
  net.activation = cfg.activation;
  net.quant = cfg.quant;
  net.learning_rate = cfg.learning_rate;
  net.threshold = cfg.threshold;
  return net;
}

// Forward pass values for a batch; one column per sample. Weighted sums are
// kept unquantized, neuron outputs are on the quantizer grid when rounding
// is enabled.
template <typename Scalar = double>
struct ForwardTrace {
  MatrixX<Scalar> x;
  MatrixX<Scalar> s_h;
  MatrixX<Scalar> h;
  MatrixX<Scalar> s_o;
  MatrixX<Scalar> o;
};

template <typename Scalar = double>
struct BackpropSignals {
  MatrixX<Scalar> o_bp;
  MatrixX<Scalar> h_bp;
};

// Crossbar weighted sums with zero bias, activation, then neuron rounding.
template <typename Scalar>
ForwardTrace<Scalar> forward(const Network<Scalar>& net, const MatrixX<Scalar>& x) {
  if (x.rows() != net.inputs()) throw std::invalid_argument("input dimension mismatch");
  ForwardTrace<Scalar> tr;
  tr.x = x;
  tr.s_h.noalias() = net.layer1.weights().transpose() * x;
  tr.h = quantize(net.quant, activate(net.activation, tr.s_h), QuantRange::Forward);
  tr.s_o.noalias() = net.layer2.weights().transpose() * tr.h;
  tr.o = quantize(net.quant, activate(net.activation, tr.s_o), QuantRange::Forward);
  return tr;
}

template <typename Scalar>
ForwardTrace<Scalar> forward(const Network<Scalar>& net, const VectorX<Scalar>& x) {
  return forward(net, MatrixX<Scalar>(x));
}

// Output and hidden error signals, rounded onto the backprop grid.
template <typename Scalar>
BackpropSignals<Scalar> backward(const Network<Scalar>& net, const ForwardTrace<Scalar>& tr,
                                 const MatrixX<Scalar>& targets) {
  if (targets.rows() != net.outputs() || targets.cols() != tr.o.cols()) {
    throw std::invalid_argument("target dimension mismatch");
  }
  BackpropSignals<Scalar> bp;
  bp.o_bp = quantize(
      net.quant,
      ((targets - tr.o).array() * activate_derivative(net.activation, tr.s_o).array()).matrix(),
      QuantRange::Backprop);
  MatrixX<Scalar> back;
  back.noalias() = net.layer2.weights() * bp.o_bp;
  bp.h_bp = quantize(
      net.quant,
      (back.array() * activate_derivative(net.activation, tr.s_h).array()).matrix(),
      QuantRange::Backprop);
  return bp;
}

template <typename Scalar = double>
struct PulseUpdates {
  MatrixXl dn1;
  MatrixXl dn2;
};

// Per-synapse pulse counts from the outer product of thresholded pre-neuron
// values and thresholded, learning-rate-scaled backprop values. Products are
// summed over the batch columns first and rounded once, nearest integer with
// ties away from zero; with a single column this is the plain per-sample
// update rule.
template <typename Scalar>
PulseUpdates<> compute_pulse_updates(const Network<Scalar>& net, const ForwardTrace<Scalar>& tr,
                                     const BackpropSignals<Scalar>& bp) {
  if (bp.o_bp.cols() != tr.x.cols() || bp.h_bp.cols() != tr.x.cols()) {
    throw std::invalid_argument("batch size mismatch between trace and backprop signals");
  }
  const Scalar th = net.threshold;
  const Scalar eta = net.learning_rate;
  MatrixX<Scalar> pre1 = apply_threshold(th, tr.x);
  MatrixX<Scalar> post1 = apply_threshold(th, (eta * bp.h_bp.array()).matrix());
  MatrixX<Scalar> pre2 = apply_threshold(th, tr.h);
  MatrixX<Scalar> post2 = apply_threshold(th, (eta * bp.o_bp.array()).matrix());
  PulseUpdates<> out;
  MatrixX<Scalar> acc;
  acc.noalias() = pre1 * post1.transpose();
  out.dn1 = acc.array().round().template cast<long>();
  acc.noalias() = pre2 * post2.transpose();
  out.dn2 = acc.array().round().template cast<long>();
  return out;
}

// Walk every synapse independently along its device curves; zero counts are
// skipped since they leave the state untouched.
template <typename Scalar>
void update_weights(Network<Scalar>& net, const PulseUpdates<>& upd) {
  if (upd.dn1.rows() != net.layer1.rows() || upd.dn1.cols() != net.layer1.cols() ||
      upd.dn2.rows() != net.layer2.rows() || upd.dn2.cols() != net.layer2.cols()) {
    throw std::invalid_argument("pulse grid dimensions do not match the network");
  }
  auto apply_grid = [](SynapseArray<Scalar>& arr, const MatrixXl& dn) {
    for (Eigen::Index j = 0; j < dn.cols(); ++j) {
      for (Eigen::Index i = 0; i < dn.rows(); ++i) {
        const long d = dn(i, j);
        if (d != 0) arr.g(i, j) = apply_pulses(arr.device, arr.g(i, j), d);
      }
    }
  };
  apply_grid(net.layer1, upd.dn1);
  apply_grid(net.layer2, upd.dn2);
}

}  // namespace rramnet

#endif  // RRAMNET_NETWORK_HPP
