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

#ifndef RRAMNET_DEVICE_FIT_HPP
#define RRAMNET_DEVICE_FIT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rramnet/device.hpp"

namespace rramnet {

// A measured conductance point. The index runs over one full pulse cycle:
// positions 0..n_max lie on the potentiation sweep, positions
// n_max..2*n_max on the depression sweep (n_max + d means d depression
// pulses after the sweep reversal).
template <typename Scalar = double>
struct MeasurementPoint {
  Scalar pulse_index = 0;
  Scalar g = 0;
};

template <typename Scalar = double>
struct FitResult {
  DeviceParams<Scalar> params;
  Scalar residual_rms = 0;
  bool converged = false;
  int iterations = 0;
  std::string message;
};

namespace detail {

template <typename Scalar>
Scalar fit_model(const DeviceParams<Scalar>& p, Scalar pulse_index) {
  const Scalar n_hi = static_cast<Scalar>(p.n_max);
  if (pulse_index <= n_hi) return potentiation(p, pulse_index);
  return depression(p, Scalar(2) * n_hi - pulse_index);
}

template <typename Scalar>
Scalar fit_cost(const std::vector<MeasurementPoint<Scalar>>& pts, int n_max,
                const Eigen::Matrix<Scalar, 3, 1>& theta,
                Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* residuals) {
  if (!(theta[1] > theta[0])) return std::numeric_limits<Scalar>::infinity();
  DeviceParams<Scalar> p;
  try {
    p = DeviceParams<Scalar>::from_k(theta[0], theta[1], n_max, theta[2]);
  } catch (const std::exception&) {
    return std::numeric_limits<Scalar>::infinity();
  }
  Scalar cost = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Scalar r = fit_model(p, pts[i].pulse_index) - pts[i].g;
    if (!std::isfinite(r)) return std::numeric_limits<Scalar>::infinity();
    if (residuals) (*residuals)[static_cast<Eigen::Index>(i)] = r;
    cost += r * r;
  }
  return cost;
}

}  // namespace detail

// Least-squares fit of (g_min, g_max, k) to a measured potentiation +
// depression cycle, with the curve prefactor tied to the window as the
// model requires. Levenberg-Marquardt with numeric Jacobians; on
// non-convergence the best iterate is returned with `converged` false.
template <typename Scalar>
FitResult<Scalar> fit_device(const std::vector<MeasurementPoint<Scalar>>& pts, int n_max,
                             int max_iterations = 200) {
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatX3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  int n_pot = 0, n_dep = 0;
  Scalar g_lo = std::numeric_limits<Scalar>::infinity();
  Scalar g_hi = -std::numeric_limits<Scalar>::infinity();
  for (const auto& pt : pts) {
    if (pt.pulse_index < Scalar(0) || pt.pulse_index > Scalar(2 * n_max)) {
      throw std::invalid_argument("pulse index outside [0, 2*n_max]");
    }
    (pt.pulse_index <= static_cast<Scalar>(n_max) ? n_pot : n_dep)++;
    g_lo = std::min(g_lo, pt.g);
    g_hi = std::max(g_hi, pt.g);
  }
  if (n_pot < 3 || n_dep < 3) {
    throw std::invalid_argument(
        "need at least 3 potentiation points (index <= n_max) and 3 depression points");
  }

  FitResult<Scalar> out;
  if (!(g_hi > g_lo)) {
    out.params = DeviceParams<Scalar>::from_k(Scalar(0), Scalar(1), n_max,
                                              std::log(static_cast<Scalar>(n_max) / Scalar(2)));
    out.converged = false;
    out.message = "degenerate input: all conductances identical";
    out.residual_rms = 0;
    return out;
  }

  const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
  Vec3 theta;
  theta << g_lo, g_hi, std::log(static_cast<Scalar>(n_max) / Scalar(2));
  VecX r(m), r_trial(m);
  Scalar cost = detail::fit_cost(pts, n_max, theta, &r);

  Scalar lambda = Scalar(1e-3);
  int iter = 0;
  bool converged = false;
  for (; iter < max_iterations; ++iter) {
    // numeric central-difference Jacobian
    MatX3 jac(m, 3);
    for (int c = 0; c < 3; ++c) {
      const Scalar h = std::max(Scalar(1e-7), Scalar(1e-7) * std::abs(theta[c]));
      Vec3 tp = theta, tm = theta;
      tp[c] += h;
      tm[c] -= h;
      VecX rp(m), rm(m);
      const Scalar cp = detail::fit_cost(pts, n_max, tp, &rp);
      const Scalar cm = detail::fit_cost(pts, n_max, tm, &rm);
      if (!std::isfinite(cp) || !std::isfinite(cm)) {
        jac.col(c).setZero();
      } else {
        jac.col(c) = (rp - rm) / (Scalar(2) * h);
      }
    }
    const Eigen::Matrix<Scalar, 3, 3> jtj = jac.transpose() * jac;
    const Vec3 jtr = jac.transpose() * r;
    if (jtr.template lpNorm<Eigen::Infinity>() < Scalar(1e-14) * (Scalar(1) + cost)) {
      converged = true;
      break;
    }

    bool stepped = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::Matrix<Scalar, 3, 3> lhs = jtj;
      lhs.diagonal() += lambda * jtj.diagonal().cwiseMax(Scalar(1e-12));
      const Vec3 delta = lhs.ldlt().solve(-jtr);
      const Vec3 trial = theta + delta;
      const Scalar trial_cost = detail::fit_cost(pts, n_max, trial, &r_trial);
      if (trial_cost < cost) {
        const Scalar rel_drop = (cost - trial_cost) / std::max(cost, Scalar(1e-300));
        theta = trial;
        r = r_trial;
        cost = trial_cost;
        lambda = std::max(lambda / Scalar(3), Scalar(1e-12));
        stepped = true;
        if (rel_drop < Scalar(1e-14) || delta.norm() < Scalar(1e-13) * (Scalar(1) + theta.norm())) {
          converged = true;
        }
        break;
      }
      lambda *= Scalar(4);
    }
    if (converged || !stepped) {
      converged = converged || stepped;
      break;
    }
  }

  out.params = DeviceParams<Scalar>::from_k(theta[0], theta[1], n_max, theta[2]);
  out.residual_rms = std::sqrt(cost / static_cast<Scalar>(m));
  out.converged = converged;
  out.iterations = iter;
  if (!converged) out.message = "iteration budget exhausted before convergence";
  return out;
}

}  // namespace rramnet

#endif  // RRAMNET_DEVICE_FIT_HPP
