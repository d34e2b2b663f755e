// Copyright 2026 The Ergoflow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ergoflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interval refinement hit the precision cap without separating two forms
/// whose coefficient vectors differ after rewriting. Usually means an
/// undeclared rational dependency between basis values.
class UndecidedComparison : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ResidueMismatch : public Error {
 public:
  using Error::Error;
};

/// A first-return step was requested at the extremal element of a finite-depth
/// residue class; the caller must deepen the truncation.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

class TimeOutOfRange : public Error {
 public:
  using Error::Error;
};

class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

class PrefixTooShort : public Error {
 public:
  using Error::Error;
};

class InfeasibleModel : public Error {
 public:
  using Error::Error;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ergoflow
