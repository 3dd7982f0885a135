// Copyright 2026 The ce-dynamics Authors
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

#ifndef CEDYN_ERROR_HPP
#define CEDYN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cedyn {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a shape, range or configuration contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A per-player vector has the wrong length.
class DimensionError : public ValidationError {
 public:
  DimensionError(std::size_t player, std::size_t expected, std::size_t actual)
      : ValidationError("dimension mismatch for player " +
                        std::to_string(player) + ": expected " +
                        std::to_string(expected) + ", got " +
                        std::to_string(actual)),
        player_(player) {}

  std::size_t player() const noexcept { return player_; }

 private:
  std::size_t player_;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A numerical routine failed to reach its accuracy contract.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace cedyn

#endif  // CEDYN_ERROR_HPP
