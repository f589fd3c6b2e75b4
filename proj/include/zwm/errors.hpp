// Copyright 2026 The ZWM Coherence Toolkit Authors
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

namespace zwm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: empty registry, bad config file, out-of-range keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller passed an argument that violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An operation would exceed the registry's photon-number truncation.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Two states built over different mode registries were combined.
class RegistryMismatchError : public Error {
 public:
  using Error::Error;
};

/// Grid does not cover the spectral function it is asked to sample.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A filter or projection removed all weight from a spectral amplitude.
class DegenerateOutputError : public Error {
 public:
  using Error::Error;
};

/// Fringe or envelope fit could not be performed or did not converge.
class FitError : public Error {
 public:
  FitError(const std::string& what, std::string diagnostics = {})
      : Error(diagnostics.empty() ? what : what + " (" + diagnostics + ")"),
        diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zwm
