#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace absorb {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// A reproducible random stream addressed by (seed, replicate, substream).
///
/// The 64-bit seed is the Philox key; the counter holds the replicate index,
/// the substream id and a 64-bit draw index, so the i-th draw of replicate r
/// is a pure function of (seed, r, substream, i). Streams never share state,
/// which is what makes replicate-parallel runs bit-identical for any
/// thread count.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on (0, 1], 53 random bits.
  double uniform();
  /// Uniform on (0, 1), 53 random bits.
  double uniform_open();

  std::uint64_t draws() const { return draw_; }

 private:
  PhiloxKey key_;
  std::uint32_t replicate_lo_;
  std::uint32_t replicate_hi_sub_;
  std::uint64_t draw_ = 0;
  PhiloxCounter block_{};
  int lane_ = 2;
};

}  // namespace absorb
