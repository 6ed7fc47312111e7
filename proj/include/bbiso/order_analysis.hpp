#pragma once

#include <optional>

#include "bbiso/numtheory.hpp"

namespace bbiso {

// How "log log n" is read. log2_of_ln reproduces the reference density
// figures for D; natural is ln ln n, kept for comparison.
enum class LogConvention { log2_of_ln, natural };

// Small/big prime threshold for n; 0 for n <= 2 and clamped at 0.
double default_threshold(u64 n, LogConvention conv = LogConvention::log2_of_ln);

// Bound on small prime powers: ln n (0 for n = 1).
double prime_power_bound(u64 n);

struct SplitOrder {
  FactoredInteger small;  // primes <= c
  FactoredInteger big;    // primes > c
};
SplitOrder split_by_prime_bound(const FactoredInteger& n, double c);

struct OrderClassification {
  u64 n = 1;
  double threshold = 0;
  FactoredInteger small_part;
  FactoredInteger big_part;
  bool pseudo_square_free = true;
  bool two_threshold_free = true;
  bool separable = true;
  bool in_D = true;
  bool in_Dhat = true;
};

OrderClassification classify_order(const FactoredInteger& n,
                                   std::optional<double> threshold_override = std::nullopt,
                                   LogConvention conv = LogConvention::log2_of_ln);
OrderClassification classify_order(u64 n, std::optional<double> threshold_override = std::nullopt,
                                   LogConvention conv = LogConvention::log2_of_ln);

// Predicates over a raw factor list, shared by classify_order and the sieve.
bool is_pseudo_square_free(const PrimePower* f, int count, double threshold, double bound);
bool is_two_free_above(const PrimePower* f, int count, double threshold);
bool is_separable(const PrimePower* f, int count, double threshold);

enum class OrderSet { D, Dhat };

struct DensityResult {
  u64 limit = 0;
  u64 count = 0;
  double density() const { return limit ? static_cast<double>(count) / limit : 0.0; }
};

// Segmented sieve, segments distributed over OpenMP threads. threads <= 0
// means the OpenMP default.
DensityResult density_scan(OrderSet set, u64 limit, int threads = 0,
                           LogConvention conv = LogConvention::log2_of_ln);
// Same kernel, one thread, no OpenMP.
DensityResult density_scan_serial(OrderSet set, u64 limit,
                                  LogConvention conv = LogConvention::log2_of_ln);
// factorize + classify_order for every n; slow, kept as the test oracle.
DensityResult density_scan_reference(OrderSet set, u64 limit,
                                     LogConvention conv = LogConvention::log2_of_ln);

}  // namespace bbiso
