#pragma once

#include <cstdint>

#include "zeroset/geometry.hpp"

namespace zeroset {

// Small counter-style generator (splitmix64) with explicitly addressed
// streams.  Every chain in the solver owns the stream whose id equals its
// chain index, so results are reproducible for any scheduling of chains:
// the same (seed, stream_id) always yields the same draw sequence.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit();

  // Uniform on [lo, hi].
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; pairs are cached.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One uniform draw from the box (consumes d uniform variates).
Point sample_box(const BoxDomain& domain, RngStream& rng);

// Uniform draw from the closed ball B(center, radius).  Direction comes from
// normalized gaussians, the radial coordinate from radius * U^(1/d), which is
// exact in any dimension.  radius == 0 returns the center exactly; a negative
// radius throws std::invalid_argument.
Point sample_ball(const Point& center, double radius, RngStream& rng);

// Same draw, writing into an existing point (hot path of the solver).
void sample_ball_into(Point& out, const Point& center, double radius, RngStream& rng);

}  // namespace zeroset
