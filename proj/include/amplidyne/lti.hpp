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

#ifndef AMPLIDYNE__LTI_HPP_
#define AMPLIDYNE__LTI_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "amplidyne/errors.hpp"
#include "amplidyne/polynomial.hpp"

namespace amplidyne
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexList = std::vector<std::complex<double>>;

/// Poles with real part at or above -kStabilityMargin count as unstable.
inline constexpr double kStabilityMargin = 1e-9;

/// SISO rational transfer function num(s)/den(s), held with a monic denominator.
class TransferFunction
{
public:
  TransferFunction()
  : num_{0.0}, den_{1.0} {}

  TransferFunction(Polynomial num, Polynomial den)
  : num_(std::move(num)), den_(std::move(den))
  {
    if (den_.is_zero()) {
      throw InvalidArgument("transfer function denominator is the zero polynomial");
    }
    if (!num_.is_zero() && num_.degree() > den_.degree()) {
      throw ImproperSystem(
              "improper transfer function: numerator degree " + std::to_string(num_.degree()) +
              " exceeds denominator degree " + std::to_string(den_.degree()));
    }
    const double lead = den_.leading();
    if (lead != 1.0) {
      num_ = num_ * (1.0 / lead);
      den_ = den_ * (1.0 / lead);
    }
  }

  static TransferFunction gain(double k) {return {Polynomial{k}, Polynomial{1.0}};}

  const Polynomial & num() const {return num_;}
  const Polynomial & den() const {return den_;}
  std::size_t order() const {return den_.degree();}
  bool strictly_proper() const {return num_.is_zero() || num_.degree() < den_.degree();}

  std::complex<double> operator()(std::complex<double> s) const {return num_(s) / den_(s);}

private:
  Polynomial num_;
  Polynomial den_;
};

/// Continuous-time realization dx/dt = A x + B u, y = C x + D u.
struct StateSpace
{
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;

  StateSpace() = default;

  StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
  : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d))
  {
    if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows() ||
      D.rows() != C.rows() || D.cols() != B.cols())
    {
      throw InvalidArgument("state-space matrices have inconsistent dimensions");
    }
  }

  static StateSpace static_gain(const Matrix & d)
  {
    return {Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d};
  }

  Eigen::Index states() const {return A.rows();}
  Eigen::Index inputs() const {return B.cols();}
  Eigen::Index outputs() const {return C.rows();}
  bool is_siso() const {return inputs() == 1 && outputs() == 1;}

  /// Frequency response C (sI - A)^-1 B + D.
  ComplexMatrix operator()(std::complex<double> s) const
  {
    const Eigen::Index n = states();
    if (n == 0) {
      return D.cast<std::complex<double>>();
    }
    ComplexMatrix sI_A = s * ComplexMatrix::Identity(n, n) - A.cast<std::complex<double>>();
    ComplexMatrix x = sI_A.partialPivLu().solve(B.cast<std::complex<double>>());
    return C.cast<std::complex<double>>() * x + D.cast<std::complex<double>>();
  }
};

namespace detail
{

inline ComplexList sort_poles(ComplexList p)
{
  std::sort(
    p.begin(), p.end(), [](const auto & a, const auto & b) {
      if (a.real() != b.real()) {
        return a.real() > b.real();
      }
      return a.imag() > b.imag();
    });
  return p;
}

}  // namespace detail

/// Controllable companion realization: first row of A carries the negated
/// denominator coefficients, B = e1, C holds the strictly proper numerator.
inline StateSpace tf_to_ss(const TransferFunction & tf)
{
  const auto n = static_cast<Eigen::Index>(tf.order());
  const std::vector<double> den = tf.den().coeffs();
  const std::vector<double> num = tf.num().padded(static_cast<std::size_t>(n) + 1);
  const double d = num[0];

  Matrix A = Matrix::Zero(n, n);
  Matrix B = Matrix::Zero(n, 1);
  Matrix C = Matrix::Zero(1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    A(0, j) = -den[j + 1];
    C(0, j) = num[j + 1] - d * den[j + 1];
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    A(i, i - 1) = 1.0;
  }
  if (n > 0) {
    B(0, 0) = 1.0;
  }
  return {A, B, C, Matrix::Constant(1, 1, d)};
}

/// C (sI - A)^-1 B + D expanded with the Leverrier-Faddeev recurrence.
inline TransferFunction ss_to_tf(const StateSpace & ss)
{
  if (!ss.is_siso()) {
    throw InvalidArgument("ss_to_tf supports single-input single-output systems only");
  }
  const Eigen::Index n = ss.states();
  const double d = ss.D(0, 0);
  if (n == 0) {
    return TransferFunction::gain(d);
  }
  // char[k] is the coefficient of s^(n-k); adj_terms[k-1] multiplies s^(n-k).
  std::vector<double> charpoly(n + 1, 0.0);
  std::vector<double> adj(n + 1, 0.0);
  charpoly[0] = 1.0;
  Matrix M = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k > 1) {
      M = ss.A * M + charpoly[k - 1] * Matrix::Identity(n, n);
    }
    adj[k] = (ss.C * M * ss.B)(0, 0);
    charpoly[k] = -(ss.A * M).trace() / static_cast<double>(k);
  }
  std::vector<double> num(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    num[k] = adj[k] + d * charpoly[k];
  }
  // Clear rounding residue in the leading numerator entries.
  double scale = 0.0;
  for (double c : num) {
    scale = std::max(scale, std::abs(c));
  }
  for (double & c : num) {
    if (std::abs(c) > 1e-14 * scale) {
      break;
    }
    c = 0.0;
  }
  return {Polynomial(std::move(num)), Polynomial(std::move(charpoly))};
}

inline TransferFunction series(const TransferFunction & g1, const TransferFunction & g2)
{
  return {g1.num() * g2.num(), g1.den() * g2.den()};
}

/// Removes pole/zero pairs closer than tol (relative to max(1, |pole|)).
inline TransferFunction minreal(const TransferFunction & tf, double tol = 1e-8)
{
  if (tf.num().is_zero() || tf.num().degree() == 0 || tf.order() == 0) {
    return tf;
  }
  ComplexList zeros = tf.num().roots();
  ComplexList poles = tf.den().roots();
  std::vector<bool> zero_used(zeros.size(), false);
  std::vector<bool> pole_used(poles.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      if (!zero_used[j] && std::abs(poles[i] - zeros[j]) <= tol * std::max(1.0, std::abs(poles[i]))) {
        zero_used[j] = pole_used[i] = true;
        any = true;
        break;
      }
    }
  }
  if (!any) {
    return tf;
  }
  ComplexList z_keep, p_keep;
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    if (!zero_used[j]) {
      z_keep.push_back(zeros[j]);
    }
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!pole_used[i]) {
      p_keep.push_back(poles[i]);
    }
  }
  return {Polynomial::from_roots(z_keep) * tf.num().leading(), Polynomial::from_roots(p_keep)};
}

/// Unity negative feedback L / (1 + L).
inline TransferFunction feedback_unity(const TransferFunction & loop)
{
  Polynomial den = loop.den() + loop.num();
  if (den.is_zero()) {
    throw IllPosedLoop("1 + L vanishes identically");
  }
  if (!loop.num().is_zero() && den.degree() < loop.num().degree()) {
    throw IllPosedLoop("1 + L has a zero at infinity; algebraic loop is singular");
  }
  return minreal(TransferFunction(loop.num(), den));
}

/// Poles sorted by real part (descending), then imaginary part (descending).
inline ComplexList poles(const TransferFunction & tf) {return detail::sort_poles(tf.den().roots());}

inline ComplexList poles(const StateSpace & ss)
{
  if (ss.states() == 0) {
    return {};
  }
  Eigen::EigenSolver<Matrix> es(ss.A, false);
  return detail::sort_poles(ComplexList(es.eigenvalues().begin(), es.eigenvalues().end()));
}

inline double dc_gain(const TransferFunction & tf)
{
  const double den0 = tf.den()(0.0);
  if (std::abs(den0) <= std::numeric_limits<double>::epsilon() * tf.den().norm_inf()) {
    throw InfiniteGain("transfer function has a pole at s = 0");
  }
  return tf.num()(0.0) / den0;
}

inline Matrix dc_gain(const StateSpace & ss)
{
  if (ss.states() == 0) {
    return ss.D;
  }
  Eigen::FullPivLU<Matrix> lu(ss.A);
  if (!lu.isInvertible()) {
    throw InfiniteGain("state matrix is singular; pole at s = 0");
  }
  return ss.D - ss.C * lu.solve(ss.B);
}

inline bool is_stable(const ComplexList & p)
{
  return std::all_of(p.begin(), p.end(), [](const auto & z) {return z.real() < -kStabilityMargin;});
}

inline bool is_stable(const TransferFunction & tf) {return is_stable(poles(tf));}
inline bool is_stable(const StateSpace & ss) {return is_stable(poles(ss));}

}  // namespace amplidyne

#endif  // AMPLIDYNE__LTI_HPP_
