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

#ifndef AMPLIDYNE__HINF_HPP_
#define AMPLIDYNE__HINF_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "amplidyne/errors.hpp"
#include "amplidyne/lti.hpp"
#include "amplidyne/riccati.hpp"

namespace amplidyne
{

namespace detail
{

inline double sigma_max(const ComplexMatrix & m)
{
  if (m.size() == 0) {
    return 0.0;
  }
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

inline double sigma_max(const Matrix & m)
{
  if (m.size() == 0) {
    return 0.0;
  }
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline Eigen::Index matrix_rank(const Matrix & m)
{
  if (m.size() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  svd.setThreshold(1e-12);
  return svd.rank();
}

/// True when gamma does not exceed the peak gain: the gamma-Hamiltonian has an
/// imaginary-axis eigenvalue j w at which some singular value of G(j w) reaches gamma.
inline bool gamma_below_norm(const StateSpace & sys, double gamma)
{
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();
  const Eigen::Index p = sys.outputs();
  const Matrix R = gamma * gamma * Matrix::Identity(m, m) - sys.D.transpose() * sys.D;
  Eigen::LDLT<Matrix> ldlt(R);
  const Matrix Rinv_Dt_C = ldlt.solve(sys.D.transpose() * sys.C);
  const Matrix Rinv_Bt = ldlt.solve(sys.B.transpose());
  const Matrix Af = sys.A + sys.B * Rinv_Dt_C;
  const Matrix Dr = Matrix::Identity(p, p) + sys.D * ldlt.solve(sys.D.transpose());
  Matrix H(2 * n, 2 * n);
  H << Af, sys.B * Rinv_Bt, -sys.C.transpose() * Dr * sys.C, -Af.transpose();

  Eigen::EigenSolver<Matrix> es(H, false);
  const double axis_tol = kImaginaryAxisTol * H.norm();
  for (const auto & lambda : es.eigenvalues()) {
    if (std::abs(lambda.real()) > axis_tol) {
      continue;
    }
    // Near-cancelled modes leave eigenvalues close to the axis regardless of
    // gamma; only eigenvalues where the gain actually reaches gamma count.
    const double w = std::abs(lambda.imag());
    if (sigma_max(sys(std::complex<double>(0.0, w))) >= gamma * (1.0 - 1e-7)) {
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Peak gain sup_w sigma_max(G(j w)) by bisection on the imaginary-axis test of
/// the gamma-Hamiltonian. Stops when the bracket width is below tol * gamma.
inline double hinf_norm(const StateSpace & sys, double tol = 1e-6)
{
  if (!(tol > 0.0)) {
    throw InvalidArgument("hinf_norm: tol must be positive");
  }
  if (!is_stable(sys)) {
    throw NormUndefined("hinf_norm: system is not stable");
  }
  const double d_max = detail::sigma_max(sys.D);
  if (sys.states() == 0) {
    return d_max;
  }
  double grid_max = d_max;
  grid_max = std::max(grid_max, detail::sigma_max(sys(0.0)));
  constexpr int kCoarse = 120;
  for (int i = 0; i < kCoarse; ++i) {
    const double w = std::pow(10.0, -3.0 + 6.0 * i / (kCoarse - 1));
    grid_max = std::max(grid_max, detail::sigma_max(sys(std::complex<double>(0.0, w))));
  }
  if (grid_max == 0.0) {
    return 0.0;
  }
  double lo = d_max + 1e-12 * std::max(1.0, d_max);
  double hi = 2.0 * grid_max;
  for (int k = 0; k < 64 && detail::gamma_below_norm(sys, hi); ++k) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi <= lo) {
    return lo;
  }
  while (hi - lo > tol * 0.5 * (lo + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (detail::gamma_below_norm(sys, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Loop-shaping weights: W1 on the tracking error, W2 on the control effort,
/// optional W3 on the plant output.
struct WeightSet
{
  TransferFunction W1;
  TransferFunction W2;
  std::optional<TransferFunction> W3;

  void validate() const
  {
    if (!is_stable(W1) || !is_stable(W2) || (W3 && !is_stable(*W3))) {
      throw InvalidArgument("loop-shaping weights must be stable");
    }
  }
};

struct WeightParameters
{
  double w1_M = 2.0;      ///< high-frequency sensitivity bound
  double w1_wb = 1.0;     ///< bandwidth [rad/s]
  double w1_eps = 1e-4;   ///< low-frequency sensitivity floor
  double w2_gain = 1e-2;  ///< constant control-effort weight
};

/// W1 = (s/M + wb) / (s + wb eps), W2 = w2_gain, no W3.
inline WeightSet default_weights(const WeightParameters & w = {})
{
  if (!(w.w1_M > 0.0 && w.w1_wb > 0.0 && w.w1_eps > 0.0 && w.w2_gain > 0.0)) {
    throw InvalidArgument("weight parameters must be strictly positive");
  }
  return {
    TransferFunction(Polynomial{1.0 / w.w1_M, w.w1_wb}, Polynomial{1.0, w.w1_wb * w.w1_eps}),
    TransferFunction::gain(w.w2_gain),
    std::nullopt,
  };
}

/// Partitioned plant [z; y] = P [w; u].
struct GeneralizedPlant
{
  Matrix A, B1, B2, C1, C2, D11, D12, D21, D22;

  GeneralizedPlant(
    Matrix a, Matrix b1, Matrix b2, Matrix c1, Matrix c2, Matrix d11, Matrix d12,
    Matrix d21, Matrix d22)
  : A(std::move(a)), B1(std::move(b1)), B2(std::move(b2)), C1(std::move(c1)), C2(std::move(c2)),
    D11(std::move(d11)), D12(std::move(d12)), D21(std::move(d21)), D22(std::move(d22))
  {
    const Eigen::Index n = A.rows();
    const bool ok = A.cols() == n && B1.rows() == n && B2.rows() == n && C1.cols() == n &&
      C2.cols() == n && D11.rows() == C1.rows() && D11.cols() == B1.cols() &&
      D12.rows() == C1.rows() && D12.cols() == B2.cols() && D21.rows() == C2.rows() &&
      D21.cols() == B1.cols() && D22.rows() == C2.rows() && D22.cols() == B2.cols();
    if (!ok) {
      throw InvalidArgument("generalized plant blocks have inconsistent dimensions");
    }
    if (detail::matrix_rank(D12) != D12.cols()) {
      throw AssumptionViolated("D12 must have full column rank");
    }
    if (detail::matrix_rank(D21) != D21.rows()) {
      throw AssumptionViolated("D21 must have full row rank");
    }
  }

  Eigen::Index states() const {return A.rows();}
  Eigen::Index disturbances() const {return B1.cols();}
  Eigen::Index controls() const {return B2.cols();}
  Eigen::Index performance_outputs() const {return C1.rows();}
  Eigen::Index measurements() const {return C2.rows();}

  /// Open-loop w -> z channel.
  StateSpace performance_channel() const {return {A, B1, C1, D11};}
};

/// Stacks z = [W1 (w - G u); W2 u; W3 G u] with measurement y = w - G u.
/// State order: plant, W1, W2, W3.
inline GeneralizedPlant augment_mixed_sensitivity(const TransferFunction & plant, const WeightSet & weights)
{
  weights.validate();
  const StateSpace g = tf_to_ss(plant);
  const StateSpace w1 = tf_to_ss(weights.W1);
  const StateSpace w2 = tf_to_ss(weights.W2);
  const StateSpace w3 = weights.W3 ? tf_to_ss(*weights.W3) : StateSpace::static_gain(Matrix::Zero(0, 1));
  const bool has_w3 = weights.W3.has_value();

  const Eigen::Index ng = g.states(), n1 = w1.states(), n2 = w2.states(), n3 = w3.states();
  const Eigen::Index n = ng + n1 + n2 + n3;
  const Eigen::Index p1 = has_w3 ? 3 : 2;
  const Eigen::Index o1 = ng, o2 = ng + n1, o3 = ng + n1 + n2;

  Matrix A = Matrix::Zero(n, n), B1 = Matrix::Zero(n, 1), B2 = Matrix::Zero(n, 1);
  Matrix C1 = Matrix::Zero(p1, n), C2 = Matrix::Zero(1, n);
  Matrix D11 = Matrix::Zero(p1, 1), D12 = Matrix::Zero(p1, 1);
  const double dg = g.D(0, 0);

  A.block(0, 0, ng, ng) = g.A;
  B2.block(0, 0, ng, 1) = g.B;

  // W1 is driven by e = w - Cg xg - Dg u.
  A.block(o1, o1, n1, n1) = w1.A;
  A.block(o1, 0, n1, ng) = -w1.B * g.C;
  B1.block(o1, 0, n1, 1) = w1.B;
  B2.block(o1, 0, n1, 1) = -w1.B * dg;
  C1.block(0, 0, 1, ng) = -w1.D * g.C;
  C1.block(0, o1, 1, n1) = w1.C;
  D11(0, 0) = w1.D(0, 0);
  D12(0, 0) = -w1.D(0, 0) * dg;

  A.block(o2, o2, n2, n2) = w2.A;
  B2.block(o2, 0, n2, 1) = w2.B;
  C1.block(1, o2, 1, n2) = w2.C;
  D12(1, 0) = w2.D(0, 0);

  if (has_w3) {
    // W3 is driven by the plant output Cg xg + Dg u.
    A.block(o3, o3, n3, n3) = w3.A;
    A.block(o3, 0, n3, ng) = w3.B * g.C;
    B2.block(o3, 0, n3, 1) = w3.B * dg;
    C1.block(2, 0, 1, ng) = w3.D * g.C;
    C1.block(2, o3, 1, n3) = w3.C;
    D12(2, 0) = w3.D(0, 0) * dg;
  }

  C2.block(0, 0, 1, ng) = -g.C;
  const Matrix D21 = Matrix::Ones(1, 1);
  const Matrix D22 = Matrix::Constant(1, 1, -dg);
  try {
    return {A, B1, B2, C1, C2, D11, D12, D21, D22};
  } catch (const AssumptionViolated & e) {
    throw AugmentationIllPosed(std::string("mixed-sensitivity augmentation: ") + e.what());
  }
}

/// Lower linear fractional transformation F_l(P, K) from w to z.
inline StateSpace close_loop(const GeneralizedPlant & gp, const StateSpace & K)
{
  const Eigen::Index n = gp.states(), nk = K.states();
  const Eigen::Index m2 = gp.controls(), p2 = gp.measurements();
  if (K.inputs() != p2 || K.outputs() != m2) {
    throw InvalidArgument("controller dimensions do not match the generalized plant");
  }
  const Matrix I_p2 = Matrix::Identity(p2, p2);
  Eigen::FullPivLU<Matrix> lu(I_p2 - gp.D22 * K.D);
  if (!lu.isInvertible()) {
    throw IllPosedLoop("I - D22 Dk is singular");
  }
  // y = Yx x + Yk xk + Yw w ; u = Ux x + Uk xk + Uw w
  const Matrix Yx = lu.solve(gp.C2);
  const Matrix Yk = lu.solve(gp.D22 * K.C);
  const Matrix Yw = lu.solve(gp.D21);
  const Matrix Ux = K.D * Yx;
  const Matrix Uk = K.C + K.D * Yk;
  const Matrix Uw = K.D * Yw;

  Matrix A(n + nk, n + nk), B(n + nk, gp.disturbances()), C(gp.performance_outputs(), n + nk);
  A << gp.A + gp.B2 * Ux, gp.B2 * Uk, K.B * Yx, K.A + K.B * Yk;
  B << gp.B1 + gp.B2 * Uw, K.B * Yw;
  C << gp.C1 + gp.D12 * Ux, gp.D12 * Uk;
  Matrix D = gp.D11 + gp.D12 * Uw;
  return {A, B, C, D};
}

namespace detail
{

inline bool is_psd(const Matrix & X)
{
  if (X.size() == 0) {
    return true;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-8;
}

inline double spectral_radius(const Matrix & M)
{
  if (M.size() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<Matrix> es(M, false);
  double r = 0.0;
  for (const auto & l : es.eigenvalues()) {
    r = std::max(r, std::abs(l));
  }
  return r;
}

/// Controller for y_tilde = y - D22 u, re-expressed on the true measurement y.
inline StateSpace unshift_d22(const StateSpace & K, const Matrix & D22)
{
  if (D22.isZero(0.0)) {
    return K;
  }
  const Eigen::Index m2 = K.outputs();
  Eigen::FullPivLU<Matrix> lu(Matrix::Identity(m2, m2) + K.D * D22);
  if (!lu.isInvertible()) {
    throw IllPosedLoop("I + Dk D22 is singular");
  }
  const Matrix MC = lu.solve(K.C);
  const Matrix MD = lu.solve(K.D);
  return {K.A - K.B * D22 * MC, K.B - K.B * D22 * MD, MC, MD};
}

}  // namespace detail

/// Central two-Riccati controller achieving ||F_l(P, K)||_inf < gamma.
///
/// D12 and D21 are first rotated and scaled to [0; I] and [0, I]; the general
/// D11 is handled inside the Hamiltonians, and D22 by a loop shift that is undone
/// on the returned controller. Throws GammaInfeasible if gamma is not achievable.
inline StateSpace synthesize_central(const GeneralizedPlant & gp, double gamma)
{
  if (!(gamma > 0.0)) {
    throw InvalidArgument("gamma must be positive");
  }
  const Eigen::Index n = gp.states();
  const Eigen::Index m1 = gp.disturbances(), m2 = gp.controls();
  const Eigen::Index p1 = gp.performance_outputs(), p2 = gp.measurements();
  if (p1 < m2 || m1 < p2) {
    throw AssumptionViolated("need at least as many performance outputs as controls and disturbances as measurements");
  }
  const double g2 = gamma * gamma;

  // z = Theta z~, u = Su u~, w = Phi w~, y~ = Sy y.
  Eigen::JacobiSVD<Matrix> svd12(gp.D12, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix Theta(p1, p1);
  Theta << svd12.matrixU().rightCols(p1 - m2), svd12.matrixU().leftCols(m2);
  const Matrix Su = svd12.matrixV() * svd12.singularValues().cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Matrix> svd21(gp.D21, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix Phi(m1, m1);
  Phi << svd21.matrixV().rightCols(m1 - p2), svd21.matrixV().leftCols(p2);
  const Matrix Sy = svd21.singularValues().cwiseInverse().asDiagonal() * svd21.matrixU().transpose();

  const Matrix & A = gp.A;
  const Matrix B1 = gp.B1 * Phi;
  const Matrix B2 = gp.B2 * Su;
  const Matrix C1 = Theta.transpose() * gp.C1;
  const Matrix C2 = Sy * gp.C2;
  const Matrix D11 = Theta.transpose() * gp.D11 * Phi;
  Matrix D12 = Matrix::Zero(p1, m2);
  D12.bottomRows(m2).setIdentity();
  Matrix D21 = Matrix::Zero(p2, m1);
  D21.rightCols(p2).setIdentity();

  const Eigen::Index r1 = p1 - m2, c1 = m1 - p2;
  const Matrix D1111 = D11.topLeftCorner(r1, c1);
  const Matrix D1112 = D11.topRightCorner(r1, p2);
  const Matrix D1121 = D11.bottomLeftCorner(m2, c1);
  const Matrix D1122 = D11.bottomRightCorner(m2, p2);

  Matrix row_block(r1, m1);
  row_block << D1111, D1112;
  Matrix col_stack(p1, c1);
  col_stack << D1111, D1121;
  const double d_bound = std::max(detail::sigma_max(row_block), detail::sigma_max(col_stack));
  if (gamma <= d_bound * (1.0 + 1e-12)) {
    throw GammaInfeasible("gamma does not exceed the direct-feedthrough bound");
  }

  Matrix B(n, m1 + m2);
  B << B1, B2;
  Matrix D1dot(p1, m1 + m2);
  D1dot << D11, D12;
  Matrix Ddot1(p1 + p2, m1);
  Ddot1 << D11, D21;
  Matrix C(p1 + p2, n);
  C << C1, C2;

  Matrix R = D1dot.transpose() * D1dot;
  R.topLeftCorner(m1, m1) -= g2 * Matrix::Identity(m1, m1);
  Matrix Rt = Ddot1 * Ddot1.transpose();
  Rt.topLeftCorner(p1, p1) -= g2 * Matrix::Identity(p1, p1);
  Eigen::FullPivLU<Matrix> R_lu(R), Rt_lu(Rt);
  if (!R_lu.isInvertible() || !Rt_lu.isInvertible()) {
    throw GammaInfeasible("indefinite weighting matrix is singular at this gamma");
  }

  auto symm = [](const Matrix & m) -> Matrix {return 0.5 * (m + m.transpose());};
  const Matrix Rinv_D1dotT_C1 = R_lu.solve(D1dot.transpose() * C1);
  const Matrix Rinv_BT = R_lu.solve(B.transpose());
  const auto HX = HamiltonianMatrix::from_blocks(
    A - B * Rinv_D1dotT_C1, symm(-B * Rinv_BT),
    symm(-C1.transpose() * C1 + C1.transpose() * D1dot * Rinv_D1dotT_C1));

  const Matrix Rtinv_Ddot1_B1T = Rt_lu.solve(Ddot1 * B1.transpose());
  const Matrix Rtinv_C = Rt_lu.solve(C);
  const auto HY = HamiltonianMatrix::from_blocks(
    A.transpose() - C.transpose() * Rtinv_Ddot1_B1T, symm(-C.transpose() * Rtinv_C),
    symm(-B1 * B1.transpose() + B1 * Ddot1.transpose() * Rtinv_Ddot1_B1T));

  Matrix X, Y;
  try {
    X = solve_riccati_hamiltonian(HX).X;
    Y = solve_riccati_hamiltonian(HY).X;
  } catch (const NoStabilizingSolution & e) {
    throw GammaInfeasible(std::string("Riccati equation: ") + e.what());
  } catch (const SubspaceIllConditioned & e) {
    throw GammaInfeasible(std::string("Riccati equation: ") + e.what());
  }
  if (!detail::is_psd(X) || !detail::is_psd(Y)) {
    throw GammaInfeasible("Riccati solution is not positive semidefinite");
  }
  if (detail::spectral_radius(X * Y) >= g2) {
    throw GammaInfeasible("coupling condition rho(X Y) < gamma^2 fails");
  }

  const Matrix F = -R_lu.solve(D1dot.transpose() * C1 + B.transpose() * X);
  const Matrix L = -(B1 * Ddot1.transpose() + Y * C.transpose()) * Rt_lu.inverse();
  const Matrix F12 = F.middleRows(c1, p2);
  const Matrix F2 = F.bottomRows(m2);
  const Matrix L12 = L.middleCols(r1, m2);
  const Matrix L2 = L.rightCols(p2);

  const Matrix Ir1 = Matrix::Identity(r1, r1), Ic1 = Matrix::Identity(c1, c1);
  const Matrix inv_rows = (g2 * Ir1 - D1111 * D1111.transpose()).inverse();
  const Matrix inv_cols = (g2 * Ic1 - D1111.transpose() * D1111).inverse();
  const Matrix Dh11 = -D1121 * D1111.transpose() * inv_rows * D1112 - D1122;
  const Matrix Dh12 =
    Eigen::LLT<Matrix>(Matrix::Identity(m2, m2) - D1121 * inv_cols * D1121.transpose()).matrixL();
  const Matrix Dh21 =
    Eigen::LLT<Matrix>(Matrix::Identity(p2, p2) - D1112.transpose() * inv_rows * D1112).matrixU();

  Eigen::FullPivLU<Matrix> Z_lu(Matrix::Identity(n, n) - Y * X / g2);
  if (!Z_lu.isInvertible()) {
    throw GammaInfeasible("I - Y X / gamma^2 is singular");
  }
  const Matrix Z = Z_lu.inverse();
  const Matrix Bh2 = Z * (B2 + L12) * Dh12;
  const Matrix Ch2 = -Dh21 * (C2 + F12);
  const Matrix Bh1 = -Z * L2 + Bh2 * Dh12.inverse() * Dh11;
  const Matrix Dh21_inv_Ch2 = Dh21.inverse() * Ch2;
  const Matrix Ch1 = F2 + Dh11 * Dh21_inv_Ch2;
  const Matrix Ah = A + B * F + Bh1 * Dh21_inv_Ch2;

  const StateSpace K(Ah, Bh1 * Sy, Su * Ch1, Su * Dh11 * Sy);
  return detail::unshift_d22(K, gp.D22);
}

struct GammaProbe
{
  double gamma;
  bool feasible;
};

struct SynthesisResult
{
  StateSpace controller;
  double gamma = 0.0;
  int iterations = 0;
  double closed_loop_norm = 0.0;
  std::vector<GammaProbe> feasibility_history;
};

/// Bisection on gamma over feasibility of the central controller, stopping
/// once (hi - lo) / hi <= tol. An infeasible upper end is doubled up to 8 times.
inline SynthesisResult gamma_iterate(const GeneralizedPlant & gp, double lo, double hi, double tol = 0.01)
{
  if (!(tol > 0.0)) {
    throw InvalidArgument("gamma_iterate: tol must be positive");
  }
  if (!(lo >= 0.0 && lo < hi)) {
    throw InvalidArgument("gamma_iterate: bracket must satisfy 0 <= lo < hi");
  }
  SynthesisResult result;
  auto probe = [&](double gamma) -> std::optional<StateSpace> {
      try {
        StateSpace K = synthesize_central(gp, gamma);
        result.feasibility_history.push_back({gamma, true});
        return K;
      } catch (const GammaInfeasible &) {
        result.feasibility_history.push_back({gamma, false});
        return std::nullopt;
      }
    };

  std::optional<StateSpace> best = probe(hi);
  for (int k = 0; k < 8 && !best; ++k) {
    lo = hi;
    hi *= 2.0;
    best = probe(hi);
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no feasible gamma found; probes:";
    for (const auto & p : result.feasibility_history) {
      msg << ' ' << p.gamma << (p.feasible ? "(ok)" : "(x)");
    }
    throw BracketInfeasible(msg.str());
  }
  while ((hi - lo) / hi > tol) {
    const double mid = 0.5 * (lo + hi);
    ++result.iterations;
    if (auto K = probe(mid)) {
      hi = mid;
      best = std::move(K);
    } else {
      lo = mid;
    }
  }
  result.gamma = hi;
  result.controller = std::move(*best);
  result.closed_loop_norm = hinf_norm(close_loop(gp, result.controller));
  return result;
}

/// The two published fourth-order controllers: the H-infinity design and the
/// gamma-iteration design.
inline std::pair<TransferFunction, TransferFunction> reference_controllers()
{
  TransferFunction hinf(
    Polynomial{0.9956, 9.88, 16.07, 5.926},
    Polynomial{1.0, 11.87, 37.39, 56.39, 0.5602});
  TransferFunction gamma_iter(
    Polynomial{0.5001, 4.963, 8.071, 2.977},
    Polynomial{1.0, 13.39, 50.62, 62.53, 0.6202});
  return {hinf, gamma_iter};
}

}  // namespace amplidyne

#endif  // AMPLIDYNE__HINF_HPP_
