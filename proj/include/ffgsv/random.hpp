// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ffgsv {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// A random stream addressed by (master seed, trial, step, lane). Streams
/// with different addresses never share a Philox counter, so results do not
/// depend on which thread draws them. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint32_t;

  Stream(std::uint64_t master_seed, std::uint32_t trial, std::uint32_t step,
         std::uint32_t lane = 0)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        lane_(lane),
        trial_(trial),
        step_(step) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (used_ == 4) {
      buffer_ = Philox4x32::block({block_, lane_, trial_, step_}, key_);
      ++block_;
      used_ = 0;
    }
    return buffer_[used_++];
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t lane_, trial_, step_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

}  // namespace ffgsv
