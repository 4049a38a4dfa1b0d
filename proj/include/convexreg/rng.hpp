#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace convexreg {

// Counter-based stream: every draw is a pure function of (seed, stream,
// counter), so parallel batches reproduce bit-identically regardless of
// scheduling. Derived streams never collide with the parent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // standard Gaussian

  Eigen::VectorXd gaussian_vector(int n);

  // Independent substream; pure in (seed, stream, i).
  RngStream derive(std::uint64_t i) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace convexreg
