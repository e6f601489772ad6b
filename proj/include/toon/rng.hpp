#ifndef TOON_RNG_HPP
#define TOON_RNG_HPP

#include <cstdint>

namespace toon {

/*
 * Counter-based SplitMix64 generator.
 *
 * The n-th 64-bit output (n = 1, 2, ...) is mix64(seed + n * 0x9E3779B97F4A7C15),
 * so a stream is fully determined by its seed and can be re-derived without
 * replaying it. Uniform doubles take the top 53 bits and lie in (0, 1].
 * Gaussian samples use the Box-Muller transform on two consecutive uniforms:
 * z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2),
 * returned in that order.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();
  double gaussian();

  /// Independent stream keyed by (seed, index); does not advance this one.
  Rng derive(std::uint64_t index) const;

  static std::uint64_t mix64(std::uint64_t z);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace toon

#endif  // TOON_RNG_HPP
