// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stepgame {

// Minimal unsigned big integer: enough for exact combinatorial counts.
// Supports multiplication and exact division by machine words plus decimal
// formatting; nothing else is needed here.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v) {
    limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  void mul(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
  }

  // Divides by d, returning the remainder. d must be nonzero.
  std::uint32_t divmod(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
    return static_cast<std::uint32_t>(rem);
  }

  int compare(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size()) {
      return limbs_.size() < other.limbs_.size() ? -1 : 1;
    }
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) { return a.compare(b) == 0; }
  friend bool operator<(const BigUint& a, const BigUint& b) { return a.compare(b) < 0; }
  friend bool operator>(const BigUint& a, const BigUint& b) { return a.compare(b) > 0; }

  std::string to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
      std::uint32_t chunk = tmp.divmod(1000000000u);
      for (int i = 0; i < 9 && !(tmp.is_zero() && chunk == 0); ++i) {
        out.push_back(static_cast<char>('0' + chunk % 10));
        chunk /= 10;
      }
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    return {out.rbegin(), out.rend()};
  }

  // "2.3961600e7"-style approximation of the decimal value.
  std::string to_scientific(int significand_digits = 6) const {
    const std::string dec = to_string();
    if (dec.size() <= 1) return dec;
    std::string mant;
    mant.push_back(dec[0]);
    mant.push_back('.');
    for (int i = 1; i <= significand_digits && i < static_cast<int>(dec.size()); ++i) {
      mant.push_back(dec[i]);
    }
    return mant + "e" + std::to_string(dec.size() - 1);
  }

 private:
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;  // little-endian base 2^32
};

}  // namespace stepgame
