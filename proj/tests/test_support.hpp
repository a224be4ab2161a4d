// Copyright 2026 The Amplidyne Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMPLIDYNE_TESTS__TEST_SUPPORT_HPP_
#define AMPLIDYNE_TESTS__TEST_SUPPORT_HPP_

// Independent oracles and random generators shared by the test binaries.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "amplidyne/lti.hpp"

namespace amplidyne::testing
{

/// Max coefficient difference relative to the largest coefficient of `expected`,
/// comparing left-padded coefficient vectors.
inline double poly_rel_error(const Polynomial & actual, const Polynomial & expected)
{
  const std::size_t n = std::max(actual.size(), expected.size());
  const auto a = actual.padded(n), b = expected.padded(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst / std::max(expected.norm_inf(), 1e-300);
}

/// Random stable pole set: real poles and complex pairs with damping >= min_zeta.
inline ComplexList random_stable_poles(std::mt19937 & rng, int n, double min_zeta = 0.2)
{
  std::uniform_real_distribution<double> wn(0.05, 20.0), zeta(min_zeta, 0.95), coin(0.0, 1.0);
  ComplexList p;
  while (static_cast<int>(p.size()) < n) {
    const double w = wn(rng);
    if (static_cast<int>(p.size()) + 2 <= n && coin(rng) < 0.5) {
      const double z = zeta(rng);
      p.emplace_back(-z * w, w * std::sqrt(1.0 - z * z));
      p.emplace_back(-z * w, -w * std::sqrt(1.0 - z * z));
    } else {
      p.emplace_back(-w, 0.0);
    }
  }
  return p;
}

/// Random stable TF; zeros are drawn on the same frequency scale as the poles
/// (either half-plane) so numerator and denominator are comparably scaled.
inline TransferFunction random_stable_tf(std::mt19937 & rng, int n, bool strictly_proper = false)
{
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const ComplexList p = random_stable_poles(rng, n);
  const int num_deg = strictly_proper ? n - 1 : n;
  ComplexList z = random_stable_poles(rng, num_deg);
  for (auto & zi : z) {
    if (zi.imag() == 0.0 && coin(rng) < 0.3) {
      zi = -zi;
    }
  }
  const double gain = g(rng);
  return {Polynomial::from_roots(z) * (gain == 0.0 ? 1.0 : gain), Polynomial::from_roots(p)};
}

/// Random stable MIMO state-space: block-diagonal modal form under a random
/// well-conditioned similarity transform.
inline StateSpace random_stable_ss(std::mt19937 & rng, int n, int m, int p, double min_zeta = 0.2)
{
  std::normal_distribution<double> g(0.0, 1.0);
  const ComplexList lam = random_stable_poles(rng, n, min_zeta);
  Matrix modal = Matrix::Zero(n, n);
  for (int i = 0; i < n; ) {
    if (lam[i].imag() != 0.0) {
      modal(i, i) = modal(i + 1, i + 1) = lam[i].real();
      modal(i, i + 1) = lam[i].imag();
      modal(i + 1, i) = -lam[i].imag();
      i += 2;
    } else {
      modal(i, i) = lam[i].real();
      ++i;
    }
  }
  Matrix T = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      T(i, j) += 0.3 * g(rng);
    }
  }
  const Matrix A = T * modal * T.inverse();
  Matrix B(n, m), C(p, n), D(p, m);
  for (auto * M : {&B, &C, &D}) {
    for (Eigen::Index i = 0; i < M->rows(); ++i) {
      for (Eigen::Index j = 0; j < M->cols(); ++j) {
        (*M)(i, j) = g(rng);
      }
    }
  }
  D *= 0.3;
  return {A, B, C, D};
}

/// Peak of sigma_max over `points` log-spaced frequencies in [w_lo, w_hi].
inline double grid_peak_gain(const StateSpace & sys, int points = 2000, double w_lo = 1e-3, double w_hi = 1e3)
{
  double peak = 0.0;
  for (int i = 0; i < points; ++i) {
    const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (points - 1));
    const ComplexMatrix h = sys(std::complex<double>(0.0, w));
    peak = std::max(peak, Eigen::JacobiSVD<ComplexMatrix>(h).singularValues()(0));
  }
  return peak;
}

inline Matrix random_matrix(std::mt19937 & rng, int r, int c)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix M(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      M(i, j) = g(rng);
    }
  }
  return M;
}

}  // namespace amplidyne::testing

#endif  // AMPLIDYNE_TESTS__TEST_SUPPORT_HPP_
