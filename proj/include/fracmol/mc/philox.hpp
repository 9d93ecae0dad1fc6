// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fracmol::mc {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// splitmix64 finalizer, used to derive keys from (seed, purpose).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream identifiers for the quantities the simulator draws.
enum class Purpose : std::uint32_t {
  Presence = 1,
  CharacteristicFunction = 2,
  Frames = 3,
  IsiSequences = 4,
  StableLaw = 5,
  Positions = 6,
};

/**
 * Sequence of uniforms addressed by (seed, purpose, a, b, c): the key comes
 * from (seed, purpose), the counter from (draw, a, b, c). Any two distinct
 * addresses give independent sequences, so work can be split across threads
 * in any way without changing results.
 */
class Stream {
 public:
  Stream(std::uint64_t seed, Purpose purpose, std::uint32_t a, std::uint32_t b = 0,
         std::uint32_t c = 0) {
    const std::uint64_t k = mix64(seed ^ mix64(static_cast<std::uint64_t>(purpose)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    ctr_ = {0u, a, b, c};
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    if (used_ == 2) refill();
    const std::uint64_t bits =
        (std::uint64_t{out_[2 * used_]} << 32) | std::uint64_t{out_[2 * used_ + 1]};
    ++used_;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

 private:
  void refill() {
    out_ = Philox4x32::block(ctr_, key_);
    ++ctr_[0];
    used_ = 0;
  }

  Philox4x32::Key key_{};
  Philox4x32::Counter ctr_{};
  Philox4x32::Counter out_{};
  int used_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fracmol::mc
