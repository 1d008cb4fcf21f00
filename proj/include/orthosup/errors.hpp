// Copyright 2026 The orthosup authors
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
#pragma once

#include <stdexcept>
#include <string>

namespace orthosup {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (matrix/vector dimensions).
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A vector that must be normalized has (near-)zero norm.
class ZeroVector : public Error {
  public:
    using Error::Error;
};

/// An input pair violates an orthogonality precondition.
class NotOrthogonal : public Error {
  public:
    using Error::Error;
};

/// An overlap vanishes where a phase factor must be read off it.
class DegenerateOverlap : public Error {
  public:
    using Error::Error;
};

/// A machine coefficient is zero where the construction divides by it.
class DegenerateCoefficient : public Error {
  public:
    using Error::Error;
};

/// Two states are too close to parallel to decompose against.
class DegenerateBasis : public Error {
  public:
    using Error::Error;
};

/// The requested target state vanishes (destructive interference).
class DegenerateTarget : public Error {
  public:
    using Error::Error;
};

/// A constructor input violates a type invariant.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

} // namespace orthosup
