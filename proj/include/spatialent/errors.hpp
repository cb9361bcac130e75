// Copyright 2026 The spatialent Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace spatialent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModeSet : public Error {
 public:
  using Error::Error;
};

class UnknownMode : public Error {
 public:
  using Error::Error;
};

class UnphysicalState : public Error {
 public:
  using Error::Error;
};

/// Basis rotation attempted between modes of different order n+m.
class OrderMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Gain mask whose regions overlap or fail to cover the integration domain.
class InvalidMask : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Measured variance at or below the electronic noise floor.
class NoiseFloorError : public Error {
 public:
  using Error::Error;
};

}  // namespace spatialent
