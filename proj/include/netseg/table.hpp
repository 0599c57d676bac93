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

#ifndef NETSEG_TABLE_HPP_
#define NETSEG_TABLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace netseg {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, std::int64_t, std::string>;

// Rectangular result table. CSV output prepends a schema_version column and
// prints doubles with 12 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

std::string format_double(double x);
void write_csv(const Table& table, std::ostream& out);
nlohmann::json table_to_json(const Table& table);

}  // namespace netseg

#endif  // NETSEG_TABLE_HPP_
