#include "absorb/rng.hpp"

namespace absorb {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  ctr = round(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = round(ctr, key);
  }
  return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      replicate_lo_(static_cast<std::uint32_t>(replicate)),
      // replicate indices above 2^32 fold their high word into the substream word
      replicate_hi_sub_(substream ^ static_cast<std::uint32_t>(replicate >> 32) * 0x9E3779B1u) {}

std::uint64_t Stream::next_u64() {
  if (lane_ == 2) {
    const std::uint64_t block = draw_ / 2;
    block_ = philox4x32_10({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                            replicate_lo_, replicate_hi_sub_},
                           key_);
    lane_ = 0;
  }
  const std::uint64_t v = (static_cast<std::uint64_t>(block_[2 * lane_ + 1]) << 32) | block_[2 * lane_];
  ++lane_;
  ++draw_;
  return v;
}

double Stream::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Stream::uniform_open() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace absorb
