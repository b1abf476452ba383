// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace stepgame {

// FNV-1a 64-bit hash, used for split tags and content checksums.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 output function (Steele, Lea, Flood / Vigna). Used as the
// documented mixer for per-sample seed derivation.
constexpr std::uint64_t mix64(std::uint64_t v) {
  std::uint64_t z = v + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-sample seed: mix64(mix64(master ^ mix64(fnv1a64(tag))) ^ index).
// Recorded in the dataset manifest so corpora reproduce cross-platform.
constexpr std::uint64_t derive_sample_seed(std::uint64_t master_seed,
                                           std::string_view stream_tag,
                                           std::uint64_t stream_index) {
  return mix64(mix64(master_seed ^ mix64(fnv1a64(stream_tag))) ^ stream_index);
}

// PCG-XSH-RR 64/32 (O'Neill, pcg32). Chosen over std::mt19937 plus
// <random> distributions because distribution output is
// implementation-defined; this generator and the bounded-draw method below
// are bit-stable across platforms.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t seq = 0x853c49e6748fea9bULL) {
    state_ = 0;
    inc_ = (seq << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Uniform draw from [0, n) via Lemire's multiply-with-rejection.
  std::uint32_t bounded(std::uint32_t n) {
    std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = (0u - n) % n;
      while (low < threshold) {
        m = static_cast<std::uint64_t>(next_u32()) * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Bernoulli draw: true with probability p (clamped to [0,1]).
  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const auto threshold = static_cast<std::uint64_t>(p * 4294967296.0);
    return next_u32() < threshold;
  }

  // Fisher-Yates, from the back, one bounded draw per step.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::uint32_t j = bounded(static_cast<std::uint32_t>(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace stepgame
