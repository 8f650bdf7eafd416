#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace routesim {

// Node identifiers are dense in [1, n]; 0 is reserved as "none".
using NodeId = uint32_t;
using Weight = uint64_t;

constexpr NodeId kNoNode = 0;
constexpr Weight kInfWeight = std::numeric_limits<Weight>::max();

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A structural invariant of the input or of a built table does not hold.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A protocol emitted more bits over one edge in one round than the model allows.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

class RetryExhausted : public Error {
 public:
  explicit RetryExhausted(const std::string& what) : Error(what) {}
};

// ---- deterministic pseudo-randomness -------------------------------------
//
// All randomness in the library flows through these helpers so that a run is
// reproducible from its integer seed on any platform.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t a, uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x853c49e6748fea9bULL)) {}

  uint64_t next() {
    state_ = splitmix64(state_);
    return state_;
  }

  // Uniform in [0, bound), bound > 0. Rejection keeps it unbiased.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [lo, hi] inclusive.
  uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

inline uint32_t ceil_log2(uint64_t x) {
  uint32_t b = 0;
  while ((1ULL << b) < x) ++b;
  return b;
}

// Bits needed to represent values in [0, x].
inline uint32_t bit_width_for(uint64_t x) {
  uint32_t b = 1;
  while (b < 64 && (x >> b) != 0) ++b;
  return b;
}

}  // namespace routesim
