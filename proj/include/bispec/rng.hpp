#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bispec {

/// Philox-4x64-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). A (seed, stream) pair addresses a stream of
/// 2^128 blocks; identical inputs reproduce identical output on any machine,
/// and distinct streams are independent, which is what makes replication-level
/// parallelism deterministic.
class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;

  static Block next(const Block& counter, std::uint64_t key0, std::uint64_t key1) {
    constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t M1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t W1 = 0xBB67AE8584CAA73BULL;
    Block x = counter;
    std::uint64_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(M0, x[0], hi0, lo0);
      mulhilo(M1, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
      k0 += W0;
      k1 += W1;
    }
    return x;
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }
};

/// One replication's private stream: counter words 2..3 carry the stream id,
/// words 0..1 enumerate blocks within the stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key0_(seed), key1_(0x9E3779B97F4A7C15ULL ^ stream_id), stream_(stream_id) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      block_ = Philox4x64::next({counter_, 0, stream_, 0xB15BEC7ULL}, key0_, key1_);
      ++counter_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  /// Uniform in the open interval (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; deterministic draw count (2 uniforms per pair).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t key0_, key1_, stream_;
  std::uint64_t counter_ = 0;
  Philox4x64::Block block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bispec
