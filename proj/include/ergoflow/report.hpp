// Copyright 2026 The Ergoflow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "ergoflow/rational.hpp"

namespace ergoflow {

using Json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

/// Row-oriented report that renders as CSV or as a JSON array of objects.
/// All content is pre-rendered strings, so the bytes depend only on the data.
class ReportTable {
 public:
  explicit ReportTable(std::vector<std::string> header)
      : header_(std::move(header)) {}

  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
      throw ValidationError("report row width mismatch");
    rows_.push_back(std::move(cells));
  }

  std::size_t size() const { return rows_.size(); }

  std::string to_csv() const {
    std::string out = join(header_);
    for (const auto& r : rows_) {
      out += '\n';
      out += join(r);
    }
    out += '\n';
    return out;
  }

  std::string to_json() const {
    Json array = Json::array();
    for (const auto& r : rows_) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < header_.size(); ++i) obj[header_[i]] = r[i];
      array.push_back(std::move(obj));
    }
    return array.dump(2) + "\n";
  }

  std::string render(const std::string& format) const {
    return format == "json" ? to_json() : to_csv();
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) out += ',';
      out += cells[i];
    }
    return out;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string digits_to_string(const std::vector<unsigned long>& digits) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0) out += '-';
    out += std::to_string(digits[i]);
  }
  return out;
}

inline Json rat_to_json(const Rat& q, std::size_t decimal_digits = 12) {
  Json obj = Json::object();
  obj["num"] = q.get_num().get_str();
  obj["den"] = q.get_den().get_str();
  obj["decimal"] = to_decimal_string(q, decimal_digits);
  return obj;
}

}  // namespace ergoflow
