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

#ifndef AMPLIDYNE__RICCATI_HPP_
#define AMPLIDYNE__RICCATI_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <string>

#include "amplidyne/errors.hpp"
#include "amplidyne/lti.hpp"

namespace amplidyne
{

/// Eigenvalues of a Hamiltonian closer than this (relative to its norm) to the
/// imaginary axis rule out a stabilizing Riccati solution.
inline constexpr double kImaginaryAxisTol = 1e-8;

/// Condition number of U1 above which X = U2 U1^-1 is refused.
inline constexpr double kSubspaceCondLimit = 1e12;

/// 2n x 2n matrix [M, R; Q, -M^T] with symmetric R and Q.
///
/// The associated Riccati equation is X M + M^T X + X R X - Q = 0, and its
/// stabilizing solution makes M + R X Hurwitz.
class HamiltonianMatrix
{
public:
  explicit HamiltonianMatrix(Matrix h)
  : h_(std::move(h))
  {
    if (h_.rows() != h_.cols() || h_.rows() % 2 != 0) {
      throw InvalidArgument("Hamiltonian matrix must be square with even dimension");
    }
    const Eigen::Index n = h_.rows() / 2;
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n).setIdentity();
    J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    const Matrix JH = J * h_;
    if ((JH - JH.transpose()).norm() > 1e-10 * std::max(1.0, h_.norm())) {
      throw InvalidArgument("matrix does not have Hamiltonian structure");
    }
  }

  static HamiltonianMatrix from_blocks(const Matrix & m, const Matrix & r, const Matrix & q)
  {
    const Eigen::Index n = m.rows();
    if (m.cols() != n || r.rows() != n || r.cols() != n || q.rows() != n || q.cols() != n) {
      throw InvalidArgument("Hamiltonian blocks have inconsistent dimensions");
    }
    Matrix h(2 * n, 2 * n);
    h << m, r, q, -m.transpose();
    return HamiltonianMatrix(std::move(h));
  }

  const Matrix & matrix() const {return h_;}
  Eigen::Index half() const {return h_.rows() / 2;}
  auto M() const {return h_.topLeftCorner(half(), half());}
  auto R() const {return h_.topRightCorner(half(), half());}
  auto Q() const {return h_.bottomLeftCorner(half(), half());}

private:
  Matrix h_;
};

struct RiccatiSolution
{
  Matrix X;
  ComplexList closed_loop_spectrum;
  double residual = 0.0;
};

/// Frobenius norm of X M + M^T X + X R X - Q.
inline double hamiltonian_residual(const HamiltonianMatrix & h, const Matrix & X)
{
  return (X * h.M() + h.M().transpose() * X + X * h.R() * X - h.Q()).norm();
}

/// Stabilizing solution from the stable invariant subspace [U1; U2] of H, X = U2 U1^-1.
inline RiccatiSolution solve_riccati_hamiltonian(const HamiltonianMatrix & h)
{
  const Eigen::Index n = h.half();
  if (n == 0) {
    return {Matrix(0, 0), {}, 0.0};
  }
  const Matrix & H = h.matrix();
  Eigen::EigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) {
    throw NoStabilizingSolution("eigendecomposition of the Hamiltonian did not converge");
  }
  const auto & lambda = es.eigenvalues();
  const auto & vecs = es.eigenvectors();
  const double axis_tol = kImaginaryAxisTol * H.norm();

  Matrix U(2 * n, n);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i].real()) <= axis_tol) {
      throw NoStabilizingSolution("Hamiltonian has an eigenvalue on the imaginary axis");
    }
    if (lambda[i].real() >= 0.0 || lambda[i].imag() < 0.0) {
      continue;
    }
    // Conjugate pairs contribute their real and imaginary parts as two columns.
    if (lambda[i].imag() == 0.0) {
      if (cols >= n) {
        break;
      }
      U.col(cols++) = vecs.col(i).real();
    } else {
      if (cols + 2 > n) {
        break;
      }
      U.col(cols++) = vecs.col(i).real();
      U.col(cols++) = vecs.col(i).imag();
    }
  }
  if (cols != n) {
    throw NoStabilizingSolution(
            "stable invariant subspace has dimension " + std::to_string(cols) + ", expected " +
            std::to_string(n));
  }
  const Matrix U1 = U.topRows(n);
  const Matrix U2 = U.bottomRows(n);
  Eigen::JacobiSVD<Matrix> svd(U1);
  const auto & sv = svd.singularValues();
  if (sv(n - 1) == 0.0 || sv(0) / sv(n - 1) > kSubspaceCondLimit) {
    throw SubspaceIllConditioned("U1 block of the stable subspace is numerically singular");
  }
  Matrix X = U1.transpose().partialPivLu().solve(U2.transpose()).transpose();
  X = 0.5 * (X + X.transpose()).eval();

  RiccatiSolution sol;
  const Matrix closed = h.M() + h.R() * X;
  Eigen::EigenSolver<Matrix> cl(closed, false);
  sol.closed_loop_spectrum.assign(cl.eigenvalues().begin(), cl.eigenvalues().end());
  sol.residual = hamiltonian_residual(h, X);
  sol.X = std::move(X);
  return sol;
}

/// Frobenius norm of A^T X + X A - X B R^-1 B^T X + Q.
inline double care_residual(
  const Matrix & A, const Matrix & B, const Matrix & Q, const Matrix & R,
  const Matrix & X)
{
  const Matrix Rinv_Bt = R.ldlt().solve(B.transpose());
  return (A.transpose() * X + X * A - X * B * Rinv_Bt * X + Q).norm();
}

/// Stabilizing solution of A^T X + X A - X B R^-1 B^T X + Q = 0.
inline RiccatiSolution solve_care(
  const Matrix & A, const Matrix & B, const Matrix & Q,
  const Matrix & R)
{
  const Eigen::Index n = A.rows(), m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != m ||
    R.cols() != m)
  {
    throw InvalidArgument("solve_care: inconsistent dimensions");
  }
  if ((Q - Q.transpose()).norm() > 1e-10 * std::max(1.0, Q.norm())) {
    throw InvalidArgument("solve_care: Q must be symmetric");
  }
  Eigen::LLT<Matrix> llt(0.5 * (R + R.transpose()));
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("solve_care: R must be symmetric positive definite");
  }
  const Matrix S = B * llt.solve(B.transpose());
  auto h = HamiltonianMatrix::from_blocks(A, -0.5 * (S + S.transpose()), -Q);
  RiccatiSolution sol = solve_riccati_hamiltonian(h);
  sol.residual = care_residual(A, B, Q, R, sol.X);
  return sol;
}

}  // namespace amplidyne

#endif  // AMPLIDYNE__RICCATI_HPP_
