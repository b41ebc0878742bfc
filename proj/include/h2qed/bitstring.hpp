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

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace h2qed {

/// Measured bit values in measurement-column order. Written left to right
/// with column 0 first, matching the ket order |q0 q1 ...>.
class Bitstring {
 public:
  Bitstring() = default;

  explicit Bitstring(std::string_view text) : bits_(text) {
    for (char c : bits_) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("Bitstring: expected only '0'/'1', got \"" + bits_ + "\"");
      }
    }
  }

  explicit Bitstring(const std::vector<int>& bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
      if (b != 0 && b != 1) throw std::invalid_argument("Bitstring: bit values must be 0 or 1");
      bits_.push_back(static_cast<char>('0' + b));
    }
  }

  /// Unpacks the low `width` bits of `packed`; bit (width-1-k) is column k.
  static Bitstring from_packed(std::uint64_t packed, int width) {
    Bitstring out;
    out.bits_.resize(static_cast<std::size_t>(width));
    for (int k = 0; k < width; ++k) {
      out.bits_[static_cast<std::size_t>(k)] = ((packed >> (width - 1 - k)) & 1u) ? '1' : '0';
    }
    return out;
  }

  std::uint64_t packed() const {
    if (bits_.size() > 64) throw std::length_error("Bitstring: more than 64 bits cannot be packed");
    std::uint64_t v = 0;
    for (char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v;
  }

  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t k) const { return bits_[k] == '1'; }
  const std::string& str() const { return bits_; }

  int parity() const {
    int p = 0;
    for (char c : bits_) p ^= (c == '1');
    return p;
  }

  /// Bits at the given column positions, in the given order.
  Bitstring select(const std::vector<int>& columns) const {
    Bitstring out;
    out.bits_.reserve(columns.size());
    for (int c : columns) out.bits_.push_back(bits_.at(static_cast<std::size_t>(c)));
    return out;
  }

  auto operator<=>(const Bitstring&) const = default;

 private:
  std::string bits_;
};

}  // namespace h2qed
