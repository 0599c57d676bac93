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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "netseg/errors.hpp"
#include "netseg/table.hpp"
#include "netseg/verify.hpp"

using namespace netseg;

TEST_CASE("double formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("csv and json tables carry the schema version") {
  Table t;
  t.columns = {"a", "b", "c"};
  t.add_row({1.5, std::int64_t{2}, std::string("x")});
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str() == "schema_version,a,b,c\n1,1.5,2,x\n");
  const auto j = table_to_json(t);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["rows"][0]["b"] == 2);
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 5);
  CHECK_THROWS_AS(run_suite("no-such-suite", VerifyOptions{}), Error);
}
