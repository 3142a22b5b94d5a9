#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace gwstat {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based generator (Philox 2x64, 10 rounds).
///
/// Value semantics: a copy replays the same output sequence, so all sampling
/// routines take their generator by value and the caller keeps control of
/// what each call sees. Independent substreams come from stream(id); a Monte
/// Carlo loop gives replicate i the generator rng.stream(i), which is
/// reproducible no matter how the loop is scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(detail::splitmix64(detail::splitmix64(seed) ^ stream_id)) {}

  /// Derived generator with an independent output stream.
  [[nodiscard]] Rng stream(std::uint64_t id) const {
    Rng r = *this;
    r.key_ = detail::splitmix64(key_ ^ detail::splitmix64(id ^ 0xA5A5A5A55A5A5A5Aull));
    r.ctr_lo_ = 0;
    r.ctr_hi_ = 0;
    r.buffered_ = false;
    r.cached_normal_ = false;
    return r;
  }

  std::uint64_t next_u64() {
    if (buffered_) {
      buffered_ = false;
      return buffer_;
    }
    std::uint64_t c0 = ctr_lo_;
    std::uint64_t c1 = ctr_hi_;
    std::uint64_t k = key_;
    if (++ctr_lo_ == 0) ++ctr_hi_;
    for (int round = 0; round < 10; ++round) {
      const auto [hi, lo] = mulhilo(0xD2B74407B1CE6E93ull, c0);
      c0 = hi ^ k ^ c1;
      c1 = lo;
      k += 0x9E3779B97F4A7C15ull;
    }
    buffer_ = c1;
    buffered_ = true;
    return c0;
  }

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the companion draw is cached.
  double normal() {
    if (cached_normal_) {
      cached_normal_ = false;
      return cache_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    cache_ = r * std::sin(a);
    cached_normal_ = true;
    return r * std::cos(a);
  }

  /// Stream identifier: a deterministic function of the seed and the
  /// stream-derivation path, usable to tag reproducible outputs.
  std::uint64_t key() const { return key_; }

  /// Uniform integer in [0, n); rejection keeps it exactly uniform.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v >= threshold) return v % n;
    }
  }

 private:
  static std::pair<std::uint64_t, std::uint64_t> mulhilo(std::uint64_t a,
                                                         std::uint64_t b) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_lo_ = 0;
  std::uint64_t ctr_hi_ = 0;
  std::uint64_t buffer_ = 0;
  bool buffered_ = false;
  bool cached_normal_ = false;
  double cache_ = 0.0;
};

/// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).
double sample_gamma(double shape, Rng& rng);

/// Chi-squared with dof >= 2 degrees of freedom.
double sample_chi_squared(double dof, Rng& rng);

}  // namespace gwstat
