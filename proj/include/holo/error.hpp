// Copyright 2026 The holonomy Authors. All Rights Reserved.
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
#include <string_view>

namespace holo {

enum class ErrorKind {
  invalid_input,
  invalid_composition,
  invalid_reparametrization,
  invalid_resolution,
  degeneracy_ambiguity,
  degeneracy_mismatch,
  invalid_generator,
  unintended_degeneracy,
  transport_breakdown,
  gauge_smoothness,
  resolution,
  integrator_resolution,
  crossing,
  invalid_comparison,
  gap_collapse,
  non_unitary,
  genericity_failure,
  budget,
  config,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_composition: return "invalid-composition";
    case ErrorKind::invalid_reparametrization: return "invalid-reparametrization";
    case ErrorKind::invalid_resolution: return "invalid-resolution";
    case ErrorKind::degeneracy_ambiguity: return "degeneracy-ambiguity";
    case ErrorKind::degeneracy_mismatch: return "degeneracy-mismatch";
    case ErrorKind::invalid_generator: return "invalid-generator";
    case ErrorKind::unintended_degeneracy: return "unintended-degeneracy";
    case ErrorKind::transport_breakdown: return "transport-breakdown";
    case ErrorKind::gauge_smoothness: return "gauge-smoothness";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::integrator_resolution: return "integrator-resolution";
    case ErrorKind::crossing: return "crossing";
    case ErrorKind::invalid_comparison: return "invalid-comparison";
    case ErrorKind::gap_collapse: return "gap-collapse";
    case ErrorKind::non_unitary: return "non-unitary";
    case ErrorKind::genericity_failure: return "genericity-failure";
    case ErrorKind::budget: return "budget";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace holo
