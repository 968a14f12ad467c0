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

#include <doctest.h>

#include <cmath>
#include <random>

#include "rramnet/device.hpp"

using rramnet::DeviceParams;
using rramnet::SynapseState;

namespace {

// Direct half-point asymmetry evaluation: the quantity the closed form must
// reproduce, computed through the curves themselves.
double anl_direct(const DeviceParams<double>& p) {
  const double half = p.n_max / 2.0;
  return (rramnet::potentiation(p, half) - rramnet::depression(p, half)) / p.range();
}

// Oracle for k(anl): bisection on the direct evaluation, independent of the
// closed form used by DeviceParams::from_anl.
double k_root_find(double g_min, double g_max, int n_max, double target_anl) {
  double lo = -30.0, hi = 60.0;  // anl_direct decreases in k
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto p = DeviceParams<double>::from_k(g_min, g_max, n_max, mid);
    if (anl_direct(p) > target_anl) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("from_anl matches the root-find oracle on the direct definition") {
  const double k1 = k_root_find(0.0, 4.0, 100, 0.7);
  const auto p1 = DeviceParams<double>::from_anl(0.0, 4.0, 100, 0.7);
  CHECK(p1.k == doctest::Approx(k1).epsilon(1e-10));
  CHECK(p1.k == doctest::Approx(3.0647251450409424).epsilon(1e-12));
  CHECK(std::abs(anl_direct(p1) - 0.7) < 1e-12);

  const auto p2 = DeviceParams<double>::from_anl(0.0, 1.0, 256, 0.5);
  CHECK(p2.k == doctest::Approx(std::log(128.0)).epsilon(1e-14));
  CHECK(p2.k == doctest::Approx(4.8520302639196172).epsilon(1e-12));
  CHECK(std::abs(anl_direct(p2) - 0.5) < 1e-12);

  std::mt19937 gen(42);
  std::uniform_real_distribution<double> anl_dist(0.02, 0.95);
  std::uniform_int_distribution<int> n_dist(4, 1024);
  for (int i = 0; i < 50; ++i) {
    const double anl = anl_dist(gen);
    const int n_max = n_dist(gen);
    const auto p = DeviceParams<double>::from_anl(0.0, 1.0, n_max, anl);
    CHECK(std::abs(anl_direct(p) - anl) < 1e-12);
    CHECK(std::abs(p.k - k_root_find(0.0, 1.0, n_max, anl)) < 1e-9);
  }
}

TEST_CASE("anl tends to zero in the large-k linear limit") {
  CHECK(DeviceParams<double>::anl_from_k(100, 40.0) < 1e-15);
  const auto p8 = DeviceParams<double>::from_k(0.0, 1.0, 255, 8.0);
  const auto p12 = DeviceParams<double>::from_k(0.0, 1.0, 255, 12.0);
  CHECK(p12.anl < p8.anl);  // anl strictly decreasing in k
}

TEST_CASE("from_anl rejects out-of-domain arguments") {
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(0, 1, 100, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(0, 1, 100, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(0, 1, 100, -0.3), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(0, 1, 100, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(1, 1, 100, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(2, 1, 100, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(DeviceParams<double>::from_anl(0, 1, 1, 0.5), std::invalid_argument);
}

TEST_CASE("curve prefactor follows the window identity") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double g_min = u(gen);
    const double g_max = g_min + u(gen);
    const double k = u(gen);
    const int n_max = 63;
    const auto p = DeviceParams<double>::from_k(g_min, g_max, n_max, k);
    const double expect = (g_max - g_min) * (1.0 + std::exp(k) / n_max);
    CHECK(p.a == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("endpoint identities hold for 100 random parameter draws") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> g0(-2.0, 2.0), dg(0.5, 6.0), kd(0.2, 7.0);
  std::uniform_int_distribution<int> nd(3, 2000);
  for (int i = 0; i < 100; ++i) {
    const double g_min = g0(gen), g_max = g_min + dg(gen);
    const int n_max = nd(gen);
    const auto p = DeviceParams<double>::from_k(g_min, g_max, n_max, kd(gen));
    const double n_hi = n_max;
    const double tol = 1e-12 * p.range();
    CHECK(std::abs(rramnet::potentiation(p, 0.0) - g_min) <= tol);
    CHECK(std::abs(rramnet::potentiation(p, n_hi) - g_max) <= tol);
    CHECK(std::abs(rramnet::depression(p, 0.0) - g_min) <= tol);
    CHECK(std::abs(rramnet::depression(p, n_hi) - g_max) <= tol);
  }
}

TEST_CASE("both curves are strictly monotone, concave vs convex") {
  const auto p = DeviceParams<double>::from_anl(0.0, 4.0, 100, 0.7);
  double prev_p = rramnet::potentiation(p, 0.0);
  double prev_d = rramnet::depression(p, 0.0);
  double prev_dp = -1, prev_dd = -1;
  bool first = true;
  for (int i = 1; i <= 1000; ++i) {
    const double n = 100.0 * i / 1000.0;
    const double gp = rramnet::potentiation(p, n);
    const double gd = rramnet::depression(p, n);
    CHECK(gp > prev_p);
    CHECK(gd > prev_d);
    const double dp = gp - prev_p, dd = gd - prev_d;
    if (!first) {
      CHECK(dp < prev_dp);  // concave: increments shrink
      CHECK(dd > prev_dd);  // convex: increments grow
    }
    first = false;
    prev_dp = dp;
    prev_dd = dd;
    prev_p = gp;
    prev_d = gd;
  }
}

TEST_CASE("half-point golden values for the measured-device parameters") {
  const auto p = DeviceParams<double>::from_anl(0.0, 4.0, 100, 0.7);
  CHECK(rramnet::potentiation(p, 50.0) == doctest::Approx(3.4).epsilon(1e-12));
  CHECK(rramnet::depression(p, 50.0) == doctest::Approx(0.6).epsilon(1e-12));
  // asymmetry sign: potentiation above depression strictly inside the window
  for (double n : {1.0, 10.0, 25.0, 50.0, 75.0, 99.0}) {
    CHECK(rramnet::potentiation(p, n) > rramnet::depression(p, n));
  }
}

TEST_CASE("curves reject positions outside the pulse range") {
  const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 100, 0.4);
  CHECK_THROWS_AS(rramnet::potentiation(p, -0.001), std::out_of_range);
  CHECK_THROWS_AS(rramnet::potentiation(p, 100.001), std::out_of_range);
  CHECK_THROWS_AS(rramnet::depression(p, -1.0), std::out_of_range);
  CHECK_THROWS_AS(rramnet::depression(p, 101.0), std::out_of_range);
}

TEST_CASE("inversion endpoints and round-trips") {
  const auto p = DeviceParams<double>::from_anl(0.2, 4.2, 100, 0.7);
  CHECK(std::abs(rramnet::invert_potentiation(p, p.g_min)) <= 1e-10);
  CHECK(rramnet::invert_potentiation(p, p.g_max) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(rramnet::invert_depression(p, p.g_max) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::abs(rramnet::invert_depression(p, p.g_min)) <= 1e-10);

  std::mt19937 gen(11);
  std::uniform_real_distribution<double> gd(p.g_min, p.g_max);
  for (int i = 0; i < 1000; ++i) {
    const double g = gd(gen);
    const double rp = rramnet::potentiation(p, rramnet::invert_potentiation(p, g));
    const double rd = rramnet::depression(p, rramnet::invert_depression(p, g));
    CHECK(std::abs(rp - g) <= 1e-9 * p.range());
    CHECK(std::abs(rd - g) <= 1e-9 * p.range());
  }

  CHECK_THROWS_AS(rramnet::invert_potentiation(p, p.g_min - 1e-6), std::out_of_range);
  CHECK_THROWS_AS(rramnet::invert_depression(p, p.g_max + 1e-6), std::out_of_range);
}

TEST_CASE("anl closed form equals the direct half-point evaluation") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> kd(0.1, 8.0);
  std::uniform_int_distribution<int> nd(4, 4096);
  for (int i = 0; i < 100; ++i) {
    const int n_max = nd(gen);
    const double k = kd(gen);
    const auto p = DeviceParams<double>::from_k(0.0, 1.0, n_max, k);
    const double half = n_max / 2.0;
    const double closed = half / (half + std::exp(k));
    CHECK(std::abs(closed - anl_direct(p)) < 1e-12);
    CHECK(std::abs(p.anl - closed) < 1e-15);
  }
}

TEST_CASE("full potentiation from the floor reaches the ceiling") {
  for (double anl : {0.2, 0.5, 0.8}) {
    const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 255, anl);
    CHECK(rramnet::apply_pulses(p, 0.0, 255) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto lin = DeviceParams<double>::ideal_linear(0.0, 1.0, 255);
  CHECK(rramnet::apply_pulses(lin, 0.0, 255) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pulse history golden values show the hysteresis loop") {
  const auto p = DeviceParams<double>::from_anl(0.0, 4.0, 100, 0.7);
  double g = p.g_min;
  g = rramnet::apply_pulses(p, g, 50);
  g = rramnet::apply_pulses(p, g, -25);
  CHECK(g == doctest::Approx(1.247697527872031).epsilon(1e-9));
  const double g_direct = rramnet::apply_pulses(p, p.g_min, 25);
  CHECK(g_direct == doctest::Approx(2.6153846153846154).epsilon(1e-9));
  CHECK(g < g_direct);  // mixed history ends lower than the direct path
}

TEST_CASE("hysteresis holds across asymmetry levels, vanishes in linear mode") {
  // The mixed path (half-window up, quarter-window down) never lands on the
  // direct quarter-window state; the gap direction depends on the curvature.
  for (double anl : {0.2, 0.4, 0.6, 0.8}) {
    const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 255, anl);
    double g = rramnet::apply_pulses(p, p.g_min, 128);
    g = rramnet::apply_pulses(p, g, -64);
    const double g_direct = rramnet::apply_pulses(p, p.g_min, 64);
    CHECK(std::abs(g - g_direct) > 1e-6 * p.range());
  }

  // exactly representable step: order of symmetric pulses cannot matter
  const auto lin = DeviceParams<double>::ideal_linear(0.0, 2.0, 256);
  double g = rramnet::apply_pulses(lin, 0.0, 100);
  g = rramnet::apply_pulses(lin, g, -100);
  CHECK(g == 0.0);
  // generic window: permutations of one multiset agree to rounding noise
  const auto lin2 = DeviceParams<double>::ideal_linear(0.3, 1.3, 255);
  double a = 0.8, b = 0.8;
  const int seq[] = {3, -2, 5, -4, 1, -3};
  for (int s : seq) a = rramnet::apply_pulses(lin2, a, s);
  for (int i = 5; i >= 0; --i) b = rramnet::apply_pulses(lin2, b, seq[i]);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("saturation is absorbing and oversized counts clamp") {
  const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 100, 0.6);
  double g = rramnet::apply_pulses(p, 0.4, 1000000);  // far beyond n_max
  CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
  const double g2 = rramnet::apply_pulses(p, g, 17);
  CHECK(g2 == g);
  const double g3 = rramnet::apply_pulses(p, 0.4, -1000000);
  CHECK(g3 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero pulses leave any state untouched") {
  const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 100, 0.3);
  for (double g : {0.0, 0.123456, 0.5, 0.987, 1.0}) {
    CHECK(rramnet::apply_pulses(p, g, 0) == g);
  }
  SynapseState<double> s{0.25};
  CHECK(rramnet::apply_pulses(p, s, 0).g == 0.25);
}

TEST_CASE("conductance never leaves the window under random pulse trains") {
  std::mt19937 gen(21);
  std::uniform_int_distribution<int> dn(-40, 40);
  for (double anl : {0.2, 0.8}) {
    const auto p = DeviceParams<double>::from_anl(0.0, 1.0, 63, anl);
    double g = 0.5;
    for (int i = 0; i < 2000; ++i) {
      g = rramnet::apply_pulses(p, g, dn(gen));
      CHECK(g >= p.g_min);
      CHECK(g <= p.g_max);
    }
  }
}

TEST_CASE("float instantiation of the device model behaves") {
  const auto p = DeviceParams<float>::from_anl(0.0f, 4.0f, 100, 0.7f);
  CHECK(rramnet::potentiation(p, 50.0f) == doctest::Approx(3.4).epsilon(1e-5));
  CHECK(rramnet::apply_pulses(p, 0.0f, 100) == doctest::Approx(4.0).epsilon(1e-5));
}
