// Copyright 2026 The pasearch Authors
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

namespace pasearch {

/// A value outside the domain of an operation (bad instance, μ outside
/// [0,1], ε outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The evolution window 1/2 ∓ δ does not fit inside [0,1].
class InadmissibleWindow : public DomainError {
 public:
  InadmissibleWindow(double gamma, double max_gamma)
      : DomainError("window half-width delta >= 1/2 for gamma = " + std::to_string(gamma) +
                    "; admissible gamma must be < " + std::to_string(max_gamma)),
        gamma_(gamma),
        max_gamma_(max_gamma) {}

  double gamma() const noexcept { return gamma_; }
  double max_gamma() const noexcept { return max_gamma_; }

 private:
  double gamma_;
  double max_gamma_;
};

/// Expected runtime requested for a protocol that never succeeds.
class ZeroSuccessProbability : public DomainError {
 public:
  ZeroSuccessProbability()
      : DomainError("success probability is zero: expected runtime is infinite") {}
};

/// Problem size above a configured resource cap.
class CapacityExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace pasearch
