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

#ifndef RRAMNET_DEVICE_HPP
#define RRAMNET_DEVICE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rramnet {

// Number of pulses spanning the conductance window for a given weight
// precision: b bits give 2^b endpoint-inclusive states, hence 2^b - 1 steps.
inline int pulses_for_bits(int bits) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("weight bits must be in [1, 30]");
  return (1 << bits) - 1;
}

// Analog synapse model. A potentiation pulse moves the state up the
// potentiation curve, a depression pulse down the depression curve; both
// curves run from g_min (pulse position 0) to g_max (pulse position n_max).
// The gap between them at the half-pulse point, normalized by the window,
// is the asymmetric nonlinearity factor `anl` in [0, 1).
//
// `linear` selects an idealized symmetric device whose conductance moves by
// (g_max - g_min) / n_max per pulse; it is the anl = 0 reference device,
// which the saturating curve family only reaches in the k -> inf limit.
template <typename Scalar = double>
struct DeviceParams {
  Scalar g_min = 0;
  Scalar g_max = 1;
  int n_max = 255;
  Scalar k = 0;      // curvature exponent; unused when linear
  Scalar exp_k = 0;  // cached e^k
  Scalar a = 0;      // cached curve prefactor
  Scalar anl = 0;    // cached asymmetric nonlinearity factor
  bool linear = false;

  Scalar range() const { return g_max - g_min; }
  Scalar step() const { return range() / static_cast<Scalar>(n_max); }
  Scalar g_ref() const { return (g_max + g_min) / Scalar(2); }

  static DeviceParams from_k(Scalar g_min, Scalar g_max, int n_max, Scalar k) {
    validate_window(g_min, g_max, n_max);
    DeviceParams p;
    p.g_min = g_min;
    p.g_max = g_max;
    p.n_max = n_max;
    p.k = k;
    p.exp_k = std::exp(k);
    p.a = (g_max - g_min) * (Scalar(1) + p.exp_k / static_cast<Scalar>(n_max));
    p.anl = anl_from_k(n_max, k);
    return p;
  }

  static DeviceParams from_anl(Scalar g_min, Scalar g_max, int n_max, Scalar anl) {
    validate_window(g_min, g_max, n_max);
    if (!(anl > Scalar(0)) || !(anl < Scalar(1))) {
      throw std::invalid_argument(
          "anl must lie strictly in (0, 1); use DeviceParams::ideal_linear for anl = 0");
    }
    return from_k(g_min, g_max, n_max, k_from_anl(n_max, anl));
  }

  static DeviceParams ideal_linear(Scalar g_min, Scalar g_max, int n_max) {
    validate_window(g_min, g_max, n_max);
    DeviceParams p;
    p.g_min = g_min;
    p.g_max = g_max;
    p.n_max = n_max;
    p.k = std::numeric_limits<Scalar>::infinity();
    p.exp_k = std::numeric_limits<Scalar>::infinity();
    p.a = 0;
    p.anl = 0;
    p.linear = true;
    return p;
  }

  // Gap between the two curves at the half-pulse point over the window;
  // closed form of the direct half-point evaluation.
  static Scalar anl_from_k(int n_max, Scalar k) {
    const Scalar half = static_cast<Scalar>(n_max) / Scalar(2);
    return half / (half + std::exp(k));
  }

  static Scalar k_from_anl(int n_max, Scalar anl) {
    const Scalar half = static_cast<Scalar>(n_max) / Scalar(2);
    return std::log(half * (Scalar(1) - anl) / anl);
  }

private:
  static void validate_window(Scalar g_min, Scalar g_max, int n_max) {
    if (!(g_max > g_min)) throw std::invalid_argument("g_max must exceed g_min");
    if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  }
};

template <typename Scalar>
struct SynapseState {
  Scalar g = 0;
};

namespace detail {
template <typename Scalar>
void check_pulse_position(const DeviceParams<Scalar>& p, Scalar n) {
  if (!(n >= Scalar(0)) || !(n <= static_cast<Scalar>(p.n_max))) {
    throw std::out_of_range("pulse position outside [0, n_max]");
  }
}

template <typename Scalar>
void check_conductance(const DeviceParams<Scalar>& p, Scalar g) {
  if (!(g >= p.g_min) || !(g <= p.g_max)) {
    throw std::out_of_range("conductance outside [g_min, g_max]");
  }
}
}  // namespace detail

// Conductance after `n` cumulative potentiation pulses starting from g_min.
// Strictly increasing and concave; hits g_min at 0 and g_max at n_max.
template <typename Scalar>
Scalar potentiation(const DeviceParams<Scalar>& p, Scalar n) {
  detail::check_pulse_position(p, n);
  if (p.linear) return p.g_min + n * p.step();
  return p.g_min + p.a * n / (n + p.exp_k);
}

// Conductance at position `n` on the depression curve. The curve is
// parameterized from g_min (n = 0) up to g_max (n = n_max); a depression
// pulse moves the position downward. Strictly increasing and convex.
template <typename Scalar>
Scalar depression(const DeviceParams<Scalar>& p, Scalar n) {
  detail::check_pulse_position(p, n);
  if (p.linear) return p.g_min + n * p.step();
  const Scalar m = static_cast<Scalar>(p.n_max) - n;
  return p.g_max - p.a * m / (m + p.exp_k);
}

// Equivalent cumulative potentiation pulse count for a conductance. The
// exact value lies in [0, n_max]; the clamp strips endpoint rounding noise.
template <typename Scalar>
Scalar invert_potentiation(const DeviceParams<Scalar>& p, Scalar g) {
  detail::check_conductance(p, g);
  if (p.linear) return (g - p.g_min) / p.step();
  const Scalar d = g - p.g_min;
  return std::clamp(p.exp_k * d / (p.a - d), Scalar(0), static_cast<Scalar>(p.n_max));
}

// Equivalent position on the depression curve for a conductance.
template <typename Scalar>
Scalar invert_depression(const DeviceParams<Scalar>& p, Scalar g) {
  detail::check_conductance(p, g);
  if (p.linear) return (g - p.g_min) / p.step();
  const Scalar d = p.g_max - g;
  const Scalar n = static_cast<Scalar>(p.n_max) - p.exp_k * d / (p.a - d);
  return std::clamp(n, Scalar(0), static_cast<Scalar>(p.n_max));
}

// State-dependent pulse update: positive counts walk the potentiation curve
// from the equivalent position of the current state, negative counts the
// depression curve. Pulse positions clamp to [0, n_max], which bounds the
// conductance to the device window; saturation is normal behavior.
template <typename Scalar>
Scalar apply_pulses(const DeviceParams<Scalar>& p, Scalar g, long long delta_n) {
  detail::check_conductance(p, g);
  if (delta_n == 0) return g;
  const Scalar n_hi = static_cast<Scalar>(p.n_max);
  Scalar g_new;
  if (p.linear) {
    g_new = g + static_cast<Scalar>(delta_n) * p.step();
  } else if (delta_n > 0) {
    const Scalar n = std::clamp(invert_potentiation(p, g) + static_cast<Scalar>(delta_n),
                                Scalar(0), n_hi);
    g_new = potentiation(p, n);
  } else {
    const Scalar n = std::clamp(invert_depression(p, g) + static_cast<Scalar>(delta_n),
                                Scalar(0), n_hi);
    g_new = depression(p, n);
  }
  return std::clamp(g_new, p.g_min, p.g_max);
}

template <typename Scalar>
SynapseState<Scalar> apply_pulses(const DeviceParams<Scalar>& p, SynapseState<Scalar> s,
                                  long long delta_n) {
  s.g = apply_pulses(p, s.g, delta_n);
  return s;
}

}  // namespace rramnet

#endif  // RRAMNET_DEVICE_HPP
