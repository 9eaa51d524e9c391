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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "speechframe/date.hpp"

namespace speechframe::store {

// A single field value. std::monostate is SQL NULL.
using Value =
    std::variant<std::monostate, std::int64_t, double, std::string, bool, Date>;

// A row, keyed by field name. Fields absent from the map read as null.
using Record = std::map<std::string, Value, std::less<>>;

// Primary key values in the order of TableSchema::key_fields.
using Key = std::vector<Value>;

inline bool is_null(const Value& v) {
  return std::holds_alternative<std::monostate>(v);
}

// Convenience constructors; they keep string literals from decaying to bool.
inline Value text(std::string s) { return Value{std::move(s)}; }
inline Value integer(std::int64_t i) { return Value{i}; }
inline Value real(double d) { return Value{d}; }
inline Value flag(bool b) { return Value{b}; }

template <typename T>
Value optional_value(const std::optional<T>& v) {
  if (!v) return Value{};
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    return Value{static_cast<std::int64_t>(*v)};
  } else {
    return Value{*v};
  }
}

std::string to_display(const Value& v);
std::string to_display(const Key& key);

// Field lookup helpers. get_* throw Error(TypeMismatch) if the field holds a
// different non-null type and Error(NotFound) when a required field is null.
const Value& field(const Record& r, std::string_view name);
std::int64_t get_int(const Record& r, std::string_view name);
std::optional<std::int64_t> get_opt_int(const Record& r, std::string_view name);
double get_real(const Record& r, std::string_view name);
std::optional<double> get_opt_real(const Record& r, std::string_view name);
const std::string& get_text(const Record& r, std::string_view name);
bool get_bool(const Record& r, std::string_view name);
Date get_date(const Record& r, std::string_view name);

}  // namespace speechframe::store
