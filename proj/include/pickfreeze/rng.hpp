#pragma once

#include <array>
#include <cstdint>

namespace pickfreeze {

// Philox 4x32-10 keyed counter generator. Every (seed, stream) pair yields an
// independent sequence, so per-row substreams can be consumed in any order and
// results never depend on thread count or scheduling.

namespace detail {

inline std::array<std::uint32_t, 4> philox_rounds(std::array<std::uint32_t, 4> c,
                                                  std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
    c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
         std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

// deterministic child seed, e.g. for replicate r of a run seeded with `seed`
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::split_mix64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

// stream id for the (column, row) substreams of one sample
inline std::uint64_t stream_id(std::uint64_t column, std::uint64_t row) {
  return (column << 32) | (row & 0xFFFFFFFFull);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_{std::uint32_t(stream), std::uint32_t(stream >> 32)} {}

  std::uint64_t next_u64() {
    if (idx_ == 2) refill();
    return buf_[idx_++];
  }

  // uniform on the open interval (0, 1); never returns an endpoint
  double next_unit() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  void refill() {
    const std::array<std::uint32_t, 4> ctr = {std::uint32_t(pos_), std::uint32_t(pos_ >> 32),
                                              stream_[0], stream_[1]};
    const auto out = detail::philox_rounds(ctr, key_);
    buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
    buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
    ++pos_;
    idx_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t pos_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int idx_ = 2;
};

}  // namespace pickfreeze
