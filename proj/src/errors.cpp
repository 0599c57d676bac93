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

#include "netseg/errors.hpp"

namespace netseg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kUndefinedIntegration: return "undefined integration";
    case ErrorCode::kNoWedge: return "no wedge";
    case ErrorCode::kNoMissingEdge: return "no missing edge";
    case ErrorCode::kNoEdges: return "no edges";
    case ErrorCode::kDegenerateGrouping: return "degenerate grouping";
    case ErrorCode::kDegenerateProbability: return "degenerate probability";
    case ErrorCode::kNoDominantEigenvalue: return "no dominant eigenvalue";
    case ErrorCode::kAlphaOutOfRange: return "alpha out of range";
    case ErrorCode::kNoStableEquilibrium: return "no stable equilibrium";
    case ErrorCode::kInfeasibleAssignment: return "infeasible assignment";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kEmptyDataset: return "empty dataset";
    case ErrorCode::kNoConvergence: return "no convergence";
  }
  return "unknown error";
}

}  // namespace netseg
