#pragma once

#include <random>

#include "bbiso/numtheory.hpp"

namespace bbiso {

// Seeded source with a platform-independent below(); std distributions are
// implementation-defined, so they are not used anywhere.
class Rng {
 public:
  explicit Rng(u64 seed) : engine_(seed) {}

  u64 next() { return engine_(); }
  u64 below(u64 n);
  // Independent stream for a sub-computation.
  Rng fork() { return Rng(next()); }

 private:
  std::mt19937_64 engine_;
};

// Failure budget for Las Vegas searches, split evenly over call sites.
struct LasVegasBudget {
  double epsilon = 1.0 / (1 << 20);
  unsigned sites = 1;

  // 64 * ceil(ln ln b + 1), scaled up when epsilon/sites is below 2^-20.
  unsigned tries(u64 b) const;
};

}  // namespace bbiso
