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

#ifndef AMPLIDYNE__SIMULATE_HPP_
#define AMPLIDYNE__SIMULATE_HPP_

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "amplidyne/errors.hpp"
#include "amplidyne/lti.hpp"

namespace amplidyne
{

struct SimulationTrace
{
  std::vector<double> t;  ///< [s], uniform grid starting at 0
  std::vector<double> y;  ///< output samples
  double u_amplitude = 0.0;
  double dt = 0.0;
};

struct StepMetrics
{
  double rise_time = 0.0;               ///< 10% -> 90% of final value [s]
  double overshoot_vs_reference = 0.0;  ///< (peak - reference) / reference [%]
  double overshoot_vs_final = 0.0;      ///< (peak - final) / final [%]
  double settling_time = 0.0;           ///< last exit from the 2% band [s]
  double settling_time_5pct = 0.0;      ///< last exit from the 5% band [s]
  double peak_value = 0.0;
  double peak_time = 0.0;
  double final_value = 0.0;
};

/// Matrix exponential by scaling and squaring with a Pade core.
inline Matrix matrix_exp(const Matrix & M)
{
  if (M.rows() != M.cols()) {
    throw InvalidArgument("matrix_exp: matrix must be square");
  }
  if (M.size() == 0) {
    return M;
  }
  if (!M.allFinite()) {
    throw InvalidArgument("matrix_exp: matrix has non-finite entries");
  }
  return M.exp();
}

/// Zero-order-hold equivalent (Ad, Bd) from exp([[A, B], [0, 0]] dt).
inline std::pair<Matrix, Matrix> discretize(const StateSpace & ss, double dt)
{
  if (!(dt > 0.0)) {
    throw InvalidArgument("discretize: dt must be positive");
  }
  const Eigen::Index n = ss.states(), m = ss.inputs();
  Matrix aug = Matrix::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = ss.A * dt;
  aug.topRightCorner(n, m) = ss.B * dt;
  const Matrix e = matrix_exp(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

namespace detail
{

inline std::size_t step_count(double t_final, double dt)
{
  if (!(dt > 0.0) || !(t_final > dt)) {
    throw InvalidArgument("step simulation requires t_final > dt > 0");
  }
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

inline void require_siso(const StateSpace & ss)
{
  if (!ss.is_siso()) {
    throw InvalidArgument("step simulation expects a single-input single-output system");
  }
}

}  // namespace detail

/// Exact (ZOH) response to a step of the given height, starting from rest.
inline SimulationTrace step_response(const StateSpace & sys, double amplitude, double t_final, double dt)
{
  detail::require_siso(sys);
  const std::size_t steps = detail::step_count(t_final, dt);
  const auto [Ad, Bd] = discretize(sys, dt);
  const Vector bu = Bd.col(0) * amplitude;
  const double du = sys.D(0, 0) * amplitude;
  const Eigen::RowVectorXd c = sys.C.row(0);

  SimulationTrace tr;
  tr.u_amplitude = amplitude;
  tr.dt = dt;
  tr.t.reserve(steps + 1);
  tr.y.reserve(steps + 1);
  Vector x = Vector::Zero(sys.states());
  for (std::size_t k = 0; k <= steps; ++k) {
    tr.t.push_back(static_cast<double>(k) * dt);
    tr.y.push_back(c.dot(x) + du);
    x = Ad * x + bu;
  }
  return tr;
}

inline SimulationTrace step_response(const TransferFunction & sys, double amplitude, double t_final, double dt)
{
  return step_response(tf_to_ss(sys), amplitude, t_final, dt);
}

/// Classical fixed-step fourth-order Runge-Kutta integration of the same step.
inline SimulationTrace rk4_step_response(const StateSpace & sys, double amplitude, double t_final, double dt)
{
  detail::require_siso(sys);
  const std::size_t steps = detail::step_count(t_final, dt);
  const Vector bu = sys.B.col(0) * amplitude;
  const double du = sys.D(0, 0) * amplitude;
  const Eigen::RowVectorXd c = sys.C.row(0);
  auto f = [&](const Vector & x) -> Vector {return sys.A * x + bu;};

  SimulationTrace tr;
  tr.u_amplitude = amplitude;
  tr.dt = dt;
  tr.t.reserve(steps + 1);
  tr.y.reserve(steps + 1);
  Vector x = Vector::Zero(sys.states());
  for (std::size_t k = 0; k <= steps; ++k) {
    tr.t.push_back(static_cast<double>(k) * dt);
    tr.y.push_back(c.dot(x) + du);
    const Vector k1 = f(x);
    const Vector k2 = f(x + 0.5 * dt * k1);
    const Vector k3 = f(x + 0.5 * dt * k2);
    const Vector k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return tr;
}

inline SimulationTrace rk4_step_response(const TransferFunction & sys, double amplitude, double t_final, double dt)
{
  return rk4_step_response(tf_to_ss(sys), amplitude, t_final, dt);
}

/// Mean of the last 2% of samples.
inline double final_value(const SimulationTrace & tr)
{
  const std::size_t n = tr.y.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 50);
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) {
    sum += tr.y[i];
  }
  return sum / static_cast<double>(tail);
}

/// True if the last 5% of samples stay within 0.1% of the final value.
inline bool is_settled(const SimulationTrace & tr)
{
  const std::size_t n = tr.y.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 20);
  const auto [lo, hi] = std::minmax_element(tr.y.end() - static_cast<std::ptrdiff_t>(tail), tr.y.end());
  return *hi - *lo <= 1e-3 * std::abs(final_value(tr));
}

namespace detail
{

// First time the (sign-normalized) response reaches `level`, interpolated.
inline double first_crossing(const SimulationTrace & tr, double sign, double level)
{
  for (std::size_t k = 0; k < tr.y.size(); ++k) {
    const double yk = sign * tr.y[k];
    if (yk >= level) {
      if (k == 0) {
        return tr.t[0];
      }
      const double yp = sign * tr.y[k - 1];
      return tr.t[k - 1] + (level - yp) / (yk - yp) * (tr.t[k] - tr.t[k - 1]);
    }
  }
  return tr.t.back();
}

// Time of the last exit from the band |y - final| <= band * |final|, interpolated.
inline double settling_time(const SimulationTrace & tr, double final, double band)
{
  const double half_width = band * std::abs(final);
  std::size_t last_out = tr.y.size();
  for (std::size_t k = tr.y.size(); k-- > 0; ) {
    if (std::abs(tr.y[k] - final) > half_width) {
      last_out = k;
      break;
    }
  }
  if (last_out == tr.y.size()) {
    return tr.t[0];
  }
  if (last_out + 1 == tr.y.size()) {
    return tr.t.back();
  }
  const double d0 = tr.y[last_out] - final;
  const double d1 = tr.y[last_out + 1] - final;
  const double edge = d0 > 0.0 ? half_width : -half_width;
  return tr.t[last_out] + (d0 - edge) / (d0 - d1) * (tr.t[last_out + 1] - tr.t[last_out]);
}

}  // namespace detail

/// Rise, overshoot, settling and peak figures of a step trace. Throws
/// NotSettled if the tail of the trace has not reached steady state.
inline StepMetrics step_metrics(const SimulationTrace & tr, double reference)
{
  if (tr.y.size() < 2 || tr.t.size() != tr.y.size()) {
    throw InvalidArgument("step_metrics: trace needs at least two samples");
  }
  if (!(reference > 0.0)) {
    throw InvalidArgument("step_metrics: reference must be positive");
  }
  if (!is_settled(tr)) {
    throw NotSettled("response has not settled by the end of the trace; increase t_final");
  }
  StepMetrics m;
  m.final_value = final_value(tr);
  if (m.final_value == 0.0) {
    throw InvalidArgument("step_metrics: final value is zero");
  }
  const double sign = m.final_value > 0.0 ? 1.0 : -1.0;
  const double fv = sign * m.final_value;
  m.rise_time = detail::first_crossing(tr, sign, 0.9 * fv) - detail::first_crossing(tr, sign, 0.1 * fv);

  std::size_t peak = 0;
  for (std::size_t k = 1; k < tr.y.size(); ++k) {
    if (sign * tr.y[k] > sign * tr.y[peak]) {
      peak = k;
    }
  }
  m.peak_value = tr.y[peak];
  m.peak_time = tr.t[peak];
  m.overshoot_vs_reference = (m.peak_value - reference) / reference * 100.0;
  m.overshoot_vs_final = (m.peak_value - m.final_value) / m.final_value * 100.0;
  m.settling_time = detail::settling_time(tr, m.final_value, 0.02);
  m.settling_time_5pct = detail::settling_time(tr, m.final_value, 0.05);
  return m;
}

}  // namespace amplidyne

#endif  // AMPLIDYNE__SIMULATE_HPP_
