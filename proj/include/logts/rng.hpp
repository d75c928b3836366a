// Copyright 2026 The logts Authors.
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

#pragma once

// Counter-based random streams.
//
// The bit source is Philox4x32-10 (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3", SC 2011). A stream is addressed by
//
//   key     = master seed (64 bits, split into two 32-bit key words)
//   counter = { block_lo, block_hi, stream_lo, stream_hi }
//
// so every (seed, stream id) pair owns 2^64 independent 128-bit blocks.
// Stream ids form a tree: split(tag) hashes the parent id with the tag.
// Experiments derive streams as  master seed -> episode index -> purpose
// tag, which makes every draw a pure function of its address and therefore
// independent of how work is scheduled across threads.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace logts {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter encrypt(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
};

// SplitMix64 output function; used only to hash stream addresses.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Purpose tags for the last level of the stream tree.
enum class StreamTag : std::uint64_t {
  kPrior = 1,
  kParticles = 2,
  kPolicy = 3,
  kReward = 4,
  kCounterfactual = 5,
  kScan = 6,
  kLemma = 7,
  kNet = 8,
};

// UniformRandomBitGenerator producing 64-bit words; usable with <random>.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_(stream_id) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  RngStream split(std::uint64_t tag) const noexcept {
    return RngStream(seed_, mix64(stream_ ^ mix64(tag + 0x632BE59BD9B4E019ull)));
  }
  RngStream split(StreamTag tag) const noexcept {
    return split(static_cast<std::uint64_t>(tag));
  }

  // master seed -> episode (or trial) index -> purpose.
  static RngStream for_task(std::uint64_t seed, std::uint64_t index, StreamTag tag) noexcept {
    return RngStream(seed).split(index).split(tag);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return std::normal_distribution<double>{}(*this); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Inverse-CDF draw of an index with probability proportional to weights.
  std::size_t categorical(std::span<const double> weights) noexcept {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last_positive;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  void refill() noexcept {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed_),
                                 static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::encrypt(ctr, key);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++block_;
    lane_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

}  // namespace logts
