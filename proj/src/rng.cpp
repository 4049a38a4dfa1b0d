#include "convexreg/rng.hpp"

#include <cmath>

namespace convexreg {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t RngStream::next_u64() {
  std::uint64_t base = mix(seed_ ^ mix(stream_ + kGolden));
  return mix(base + kGolden * ++counter_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // Box-Muller; the sine companion is discarded so the draw count per call
  // is fixed.
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXd RngStream::gaussian_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

RngStream RngStream::derive(std::uint64_t i) const {
  return RngStream(seed_, mix(stream_ * kGolden + i + 1));
}

}  // namespace convexreg
