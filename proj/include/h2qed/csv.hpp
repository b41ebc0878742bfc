// Copyright 2026 The h2qed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace h2qed {

/// Minimal RFC 4180 writer with fixed numeric formatting so identical runs
/// produce identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) { write_row(header); }

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& operator<<(std::string_view s) {
      cells_.push_back(quote(s));
      return *this;
    }
    Row& operator<<(const char* s) { return *this << std::string_view(s); }
    Row& operator<<(const std::string& s) { return *this << std::string_view(s); }
    Row& operator<<(double v) {
      cells_.push_back(format_double(v));
      return *this;
    }
    Row& operator<<(std::uint64_t v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    Row& operator<<(int v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    ~Row() noexcept(false) { w_.write_row(cells_); }

   private:
    CsvWriter& w_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  std::string str() const { return os_.str(); }

  static std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

  static std::string quote(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

 private:
  void write_row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

  std::size_t width_;
  std::ostringstream os_;
};

}  // namespace h2qed
