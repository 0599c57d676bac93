// Copyright 2026 The netseg Authors.
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

#ifndef NETSEG_ERRORS_HPP_
#define NETSEG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace netseg {

// Every failure the library reports carries one of these codes so callers
// (and the CLI) can branch on the kind of failure without parsing messages.
enum class ErrorCode {
  kInvalidArgument,
  kUndefinedIntegration,
  kNoWedge,
  kNoMissingEdge,
  kNoEdges,
  kDegenerateGrouping,
  kDegenerateProbability,
  kNoDominantEigenvalue,
  kAlphaOutOfRange,
  kNoStableEquilibrium,
  kInfeasibleAssignment,
  kDomain,
  kParse,
  kEmptyDataset,
  kNoConvergence,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netseg

#endif  // NETSEG_ERRORS_HPP_
