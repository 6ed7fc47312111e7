#include "bbiso/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbiso {

u64 Rng::below(u64 n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  u64 limit = ~u64{0} - (~u64{0} % n);
  for (;;) {
    u64 x = engine_();
    if (x < limit) return x % n;
  }
}

unsigned LasVegasBudget::tries(u64 b) const {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
  double lnln = b > 2 ? std::log(std::log(static_cast<double>(b))) : 0.0;
  double base = 64.0 * std::ceil(std::max(lnln, 0.0) + 1.0);
  double scale = std::max(1.0, std::log2(std::max(1u, sites) / epsilon) / 20.0);
  return static_cast<unsigned>(std::ceil(base * scale));
}

}  // namespace bbiso
