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

#ifndef AMPLIDYNE__ERRORS_HPP_
#define AMPLIDYNE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace amplidyne
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Caller handed in something that violates a documented precondition.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class ImproperSystem : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

class IllPosedLoop : public Error
{
public:
  using Error::Error;
};

/// dc gain requested for a system with a pole at s = 0.
class InfiniteGain : public Error
{
public:
  using Error::Error;
};

class NoStabilizingSolution : public Error
{
public:
  using Error::Error;
};

class SubspaceIllConditioned : public Error
{
public:
  using Error::Error;
};

class NormUndefined : public Error
{
public:
  using Error::Error;
};

class AssumptionViolated : public Error
{
public:
  using Error::Error;
};

class AugmentationIllPosed : public Error
{
public:
  using Error::Error;
};

/// The probed performance level cannot be achieved by any stabilizing controller.
class GammaInfeasible : public Error
{
public:
  using Error::Error;
};

class BracketInfeasible : public Error
{
public:
  using Error::Error;
};

/// Simulation horizon too short for the response to reach steady state.
class NotSettled : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace amplidyne

#endif  // AMPLIDYNE__ERRORS_HPP_
