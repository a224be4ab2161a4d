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

#ifndef AMPLIDYNE__POLYNOMIAL_HPP_
#define AMPLIDYNE__POLYNOMIAL_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "amplidyne/errors.hpp"

namespace amplidyne
{

/// Real polynomial in the Laplace variable, coefficients in descending powers of s.
///
/// Leading zeros are stripped on construction, so the leading coefficient is
/// nonzero unless the polynomial is the zero polynomial, stored as {0}.
class Polynomial
{
public:
  Polynomial()
  : coeffs_{0.0} {}

  Polynomial(std::initializer_list<double> c)
  : Polynomial(std::vector<double>(c)) {}

  explicit Polynomial(std::vector<double> c)
  : coeffs_(std::move(c))
  {
    for (double v : coeffs_) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("polynomial coefficient is not finite");
      }
    }
    trim();
  }

  static Polynomial constant(double c) {return Polynomial{c};}

  /// Monic polynomial with the given roots; conjugate pairs give real coefficients.
  static Polynomial from_roots(std::span<const std::complex<double>> roots)
  {
    std::vector<std::complex<double>> c{1.0};
    for (const auto & r : roots) {
      std::vector<std::complex<double>> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += c[i];
        next[i + 1] -= c[i] * r;
      }
      c = std::move(next);
    }
    std::vector<double> re(c.size());
    std::transform(c.begin(), c.end(), re.begin(), [](auto z) {return z.real();});
    return Polynomial(std::move(re));
  }

  const std::vector<double> & coeffs() const {return coeffs_;}
  std::size_t degree() const {return coeffs_.size() - 1;}
  std::size_t size() const {return coeffs_.size();}
  double leading() const {return coeffs_.front();}
  double operator[](std::size_t i) const {return coeffs_[i];}
  bool is_zero() const {return coeffs_.size() == 1 && coeffs_[0] == 0.0;}

  /// Coefficient of s^k (zero past the degree).
  double coeff_of_power(std::size_t k) const
  {
    return k > degree() ? 0.0 : coeffs_[degree() - k];
  }

  double operator()(double s) const
  {
    double acc = 0.0;
    for (double c : coeffs_) {
      acc = acc * s + c;
    }
    return acc;
  }

  std::complex<double> operator()(std::complex<double> s) const
  {
    std::complex<double> acc = 0.0;
    for (double c : coeffs_) {
      acc = acc * s + c;
    }
    return acc;
  }

  /// Largest absolute coefficient.
  double norm_inf() const
  {
    double m = 0.0;
    for (double c : coeffs_) {
      m = std::max(m, std::abs(c));
    }
    return m;
  }

  /// Coefficients left-padded with zeros to `length` entries.
  std::vector<double> padded(std::size_t length) const
  {
    std::vector<double> out(std::max(length, coeffs_.size()), 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), out.end() - static_cast<std::ptrdiff_t>(coeffs_.size()));
    return out;
  }

  /// Roots as eigenvalues of the companion matrix.
  std::vector<std::complex<double>> roots() const
  {
    const std::size_t n = degree();
    if (n == 0) {
      return {};
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      comp(0, j) = -coeffs_[j + 1] / coeffs_[0];
    }
    for (std::size_t i = 1; i < n; ++i) {
      comp(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<std::complex<double>> r(es.eigenvalues().begin(), es.eigenvalues().end());
    return r;
  }

  Polynomial operator*(double k) const
  {
    std::vector<double> c = coeffs_;
    for (double & v : c) {
      v *= k;
    }
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial & a, const Polynomial & b)
  {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<double> pa = a.padded(n), pb = b.padded(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] += pb[i];
    }
    return Polynomial(std::move(pa));
  }

  friend Polynomial operator-(const Polynomial & a, const Polynomial & b) {return a + b * -1.0;}

  friend bool operator==(const Polynomial &, const Polynomial &) = default;

private:
  void trim()
  {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double v) {return v != 0.0;});
    coeffs_.erase(coeffs_.begin(), first);
    if (coeffs_.empty()) {
      coeffs_.push_back(0.0);
    }
  }

  std::vector<double> coeffs_;
};

/// Coefficient convolution.
inline Polynomial poly_mul(const Polynomial & a, const Polynomial & b)
{
  if (a.is_zero() || b.is_zero()) {
    return Polynomial{};
  }
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] += a[i] * b[j];
    }
  }
  return Polynomial(std::move(c));
}

inline Polynomial operator*(const Polynomial & a, const Polynomial & b) {return poly_mul(a, b);}

}  // namespace amplidyne

#endif  // AMPLIDYNE__POLYNOMIAL_HPP_
