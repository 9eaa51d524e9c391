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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace speechframe {

using Date = std::chrono::year_month_day;

// Strict ISO-8601 calendar date, "YYYY-MM-DD". Returns nullopt for anything
// else, including well-formed but non-existent dates such as 2021-02-29.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(Date date);

// Current UTC calendar date.
Date today();

}  // namespace speechframe
