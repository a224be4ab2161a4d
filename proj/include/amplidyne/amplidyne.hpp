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

#ifndef AMPLIDYNE__AMPLIDYNE_HPP_
#define AMPLIDYNE__AMPLIDYNE_HPP_

#include "amplidyne/errors.hpp"
#include "amplidyne/polynomial.hpp"
#include "amplidyne/lti.hpp"
#include "amplidyne/plant.hpp"
#include "amplidyne/riccati.hpp"
#include "amplidyne/hinf.hpp"
#include "amplidyne/simulate.hpp"
#include "amplidyne/io.hpp"

#endif  // AMPLIDYNE__AMPLIDYNE_HPP_
