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

#include "speechframe/value.hpp"

#include <charconv>

#include "speechframe/error.hpp"

namespace speechframe::store {

namespace {

std::string type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "null";
    case 1: return "integer";
    case 2: return "real";
    case 3: return "text";
    case 4: return "boolean";
    case 5: return "date";
  }
  return "?";
}

template <typename T>
const T* typed(const Record& r, std::string_view name, const char* expected) {
  const Value& v = field(r, name);
  if (is_null(v)) return nullptr;
  if (const T* p = std::get_if<T>(&v)) return p;
  throw Error(ErrorCode::TypeMismatch, "field " + std::string(name) + " holds " +
                                           type_name(v) + ", expected " + expected);
}

template <typename T>
const T& required(const Record& r, std::string_view name, const char* expected) {
  const T* p = typed<T>(r, name, expected);
  if (!p) throw Error(ErrorCode::NotFound, "field " + std::string(name) + " is null");
  return *p;
}

}  // namespace

std::string to_display(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "null";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
          return std::string(buf, end);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return format_date(x);
        }
      },
      v);
}

std::string to_display(const Key& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ',';
    out += to_display(key[i]);
  }
  return out;
}

const Value& field(const Record& r, std::string_view name) {
  static const Value kNull{};
  auto it = r.find(name);
  return it == r.end() ? kNull : it->second;
}

std::int64_t get_int(const Record& r, std::string_view name) {
  return required<std::int64_t>(r, name, "integer");
}

std::optional<std::int64_t> get_opt_int(const Record& r, std::string_view name) {
  const auto* p = typed<std::int64_t>(r, name, "integer");
  return p ? std::optional<std::int64_t>(*p) : std::nullopt;
}

double get_real(const Record& r, std::string_view name) {
  const Value& v = field(r, name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return required<double>(r, name, "real");
}

std::optional<double> get_opt_real(const Record& r, std::string_view name) {
  if (is_null(field(r, name))) return std::nullopt;
  return get_real(r, name);
}

const std::string& get_text(const Record& r, std::string_view name) {
  return required<std::string>(r, name, "text");
}

bool get_bool(const Record& r, std::string_view name) {
  return required<bool>(r, name, "boolean");
}

Date get_date(const Record& r, std::string_view name) {
  return required<Date>(r, name, "date");
}

}  // namespace speechframe::store
