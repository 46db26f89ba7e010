#include "zeroset/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zeroset {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Decorrelate streams by hashing seed and stream id separately; equal
  // (seed, stream_id) pairs always produce the same starting state.
  state_ = mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(mix64(stream_id) + 0x7F4A7C15F39CC060ULL);
}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_unit();
  while (u1 <= 0.0) u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Point sample_box(const BoxDomain& domain, RngStream& rng) {
  Point p(domain.dimension());
  for (int i = 0; i < domain.dimension(); ++i) {
    p[i] = rng.uniform(domain.lower()[i], domain.upper()[i]);
  }
  return p;
}

void sample_ball_into(Point& out, const Point& center, double radius, RngStream& rng) {
  if (radius < 0.0) {
    throw std::invalid_argument("sample_ball: radius must be non-negative");
  }
  const std::size_t d = center.size();
  out.resize(d);
  if (radius == 0.0) {
    out = center;
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = rng.normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double r = radius * std::pow(rng.next_unit(), 1.0 / static_cast<double>(d));
  const double scale = r / std::sqrt(norm2);
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = center[i] + out[i] * scale;
  }
}

Point sample_ball(const Point& center, double radius, RngStream& rng) {
  Point p;
  sample_ball_into(p, center, radius, rng);
  return p;
}

}  // namespace zeroset
