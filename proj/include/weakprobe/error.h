// Copyright 2026 The weakprobe Authors
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

#ifndef WEAKPROBE_ERROR_H_
#define WEAKPROBE_ERROR_H_

#include <stdexcept>
#include <string>

namespace weakprobe {

/// Input rejected before any computation (bad dimensions, ranges, bases).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed input that lies outside the numerical domain of an
/// operation, e.g. a post-selection orthogonal to the pre-selection.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// tr(rho_f rho_i) below the overlap floor; weak quantities are undefined.
class NearOrthogonalSelection : public DomainError {
 public:
  NearOrthogonalSelection(const std::string& what, double overlap)
      : DomainError(what), overlap_(overlap) {}
  double overlap() const { return overlap_; }

 private:
  double overlap_;
};

/// Post-selection annihilated the probe (success probability ~ 0).
class OrthogonalPostSelection : public DomainError {
 public:
  OrthogonalPostSelection(const std::string& what, double success_prob)
      : DomainError(what), success_prob_(success_prob) {}
  double success_prob() const { return success_prob_; }

 private:
  double success_prob_;
};

}  // namespace weakprobe

#endif  // WEAKPROBE_ERROR_H_
