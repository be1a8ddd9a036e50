#pragma once

#include <cstdint>

namespace banditgap {

// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based random stream. Draw k is a pure function of (base, k), and
// child streams are derived by key, so per-trial / per-arm substreams are
// reproducible and independent of the order in which other streams are used.
class RngStream {
 public:
  RngStream() : base_(0), ctr_(0) {}
  explicit RngStream(uint64_t base) : base_(base), ctr_(0) {}

  static RngStream root(uint64_t seed) {
    return RngStream(mix64(seed ^ 0x6a09e667f3bcc908ULL));
  }

  // Derive an independent substream. Safe to call repeatedly with the same
  // key (the result does not depend on this stream's position).
  RngStream child(uint64_t key) const {
    return RngStream(mix64(base_ + 0x9e3779b97f4a7c15ULL * (key + 1)));
  }

  uint64_t next_u64() {
    ++ctr_;
    return mix64(base_ + 0x9e3779b97f4a7c15ULL * ctr_);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t base_;
  uint64_t ctr_;
};

}  // namespace banditgap
