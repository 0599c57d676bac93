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

#ifndef NETSEG_VERIFY_HPP_
#define NETSEG_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netseg/table.hpp"

namespace netseg {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Figure data plus pass/fail checks for one verification suite.
struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  Table table;

  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  // Multiplies replicate counts; 1 reproduces the documented experiment.
  double effort = 1.0;
  unsigned threads = 0;
};

// sbm-bounds, jr-convergence, jr-interventions, fixed-node, estimation-recovery
const std::vector<std::string>& suite_names();

// Throws kInvalidArgument for an unknown suite name.
SuiteReport run_suite(std::string_view name, const VerifyOptions& options);

SuiteReport verify_sbm_bounds(const VerifyOptions& options);
SuiteReport verify_jr_convergence(const VerifyOptions& options);
SuiteReport verify_jr_interventions(const VerifyOptions& options);
SuiteReport verify_fixed_node(const VerifyOptions& options);
SuiteReport verify_estimation_recovery(const VerifyOptions& options);

}  // namespace netseg

#endif  // NETSEG_VERIFY_HPP_
