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

#ifndef AMPLIDYNE__PLANT_HPP_
#define AMPLIDYNE__PLANT_HPP_

#include <array>
#include <cmath>
#include <string_view>
#include <utility>

#include "amplidyne/errors.hpp"
#include "amplidyne/lti.hpp"

namespace amplidyne
{

/// Lumped constants of the motor-driven generator cascade.
///
/// K_1 folds the motor flux into the torque constant and K_3 folds the
/// generator field flux into its voltage constant; the flux terms are not
/// modelled separately. Defaults reproduce the reference machine.
struct PlantParameters
{
  double L_m = 18.0;   ///< motor inductance [H]
  double R_m = 27.0;   ///< motor resistance [Ohm]
  double J_m = 66.0;   ///< motor inertia [kg m^2]
  double B_m = 28.0;   ///< motor damping [N m s / rad]
  double L_g = 16.0;   ///< generator inductance [H]
  double R_g = 28.0;   ///< generator resistance [Ohm]
  double R_L = 100.0;  ///< load resistance [Ohm]
  double K_1 = 8.0;    ///< motor torque constant [N m / A]
  double K_2 = 16.0;   ///< motor back-EMF constant [V s / rad]
  double K_3 = 18.0;   ///< generator voltage constant [V s / rad]
  double N = 55.0;     ///< gear ratio

  /// Name/member pairs in configuration-file order.
  static constexpr std::array<std::pair<std::string_view, double PlantParameters::*>, 11> fields()
  {
    return {{
      {"L_m", &PlantParameters::L_m}, {"R_m", &PlantParameters::R_m},
      {"J_m", &PlantParameters::J_m}, {"B_m", &PlantParameters::B_m},
      {"L_g", &PlantParameters::L_g}, {"R_g", &PlantParameters::R_g},
      {"R_L", &PlantParameters::R_L}, {"K_1", &PlantParameters::K_1},
      {"K_2", &PlantParameters::K_2}, {"K_3", &PlantParameters::K_3},
      {"N", &PlantParameters::N},
    }};
  }

  /// Throws InvalidArgument unless every constant is finite and strictly positive.
  void validate() const
  {
    for (const auto & [name, member] : fields()) {
      const double v = this->*member;
      if (!std::isfinite(v) || v <= 0.0) {
        throw InvalidArgument("plant parameter " + std::string(name) + " must be strictly positive");
      }
    }
  }
};

namespace detail
{

// Limiting cases (a zero inductance, say) are allowed by the per-stage
// builders; only negative or non-finite values are refused there.
inline void require_nonnegative(const PlantParameters & p)
{
  for (const auto & [name, member] : PlantParameters::fields()) {
    const double v = p.*member;
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("plant parameter " + std::string(name) + " must be nonnegative");
    }
  }
}

}  // namespace detail

/// Armature voltage to shaft speed: K_1 / ((J_m s + B_m)(L_m s + R_m) + K_1 K_2).
inline TransferFunction motor_tf(const PlantParameters & p)
{
  detail::require_nonnegative(p);
  const Polynomial mech{p.J_m, p.B_m};
  const Polynomial elec{p.L_m, p.R_m};
  return {Polynomial{p.K_1}, mech * elec + Polynomial{p.K_1 * p.K_2}};
}

/// Motor shaft speed to load voltage through the gearbox: N R_L K_3 / (L_g s + R_g + R_L).
inline TransferFunction generator_tf(const PlantParameters & p)
{
  detail::require_nonnegative(p);
  return {Polynomial{p.N * p.R_L * p.K_3}, Polynomial{p.L_g, p.R_g + p.R_L}};
}

/// Armature voltage to load voltage.
inline TransferFunction amplidyne_tf(const PlantParameters & p)
{
  p.validate();
  return series(motor_tf(p), generator_tf(p));
}

}  // namespace amplidyne

#endif  // AMPLIDYNE__PLANT_HPP_
