#include "bbiso/order_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bbiso {

double default_threshold(u64 n, LogConvention conv) {
  if (n <= 2) return 0.0;
  double ln = std::log(static_cast<double>(n));
  double t = conv == LogConvention::natural ? std::log(ln) : std::log2(ln);
  return std::max(t, 0.0);
}

double prime_power_bound(u64 n) { return n <= 1 ? 0.0 : std::log(static_cast<double>(n)); }

SplitOrder split_by_prime_bound(const FactoredInteger& n, double c) {
  std::vector<PrimePower> small, big;
  for (const auto& pp : n.factors()) (static_cast<double>(pp.prime) <= c ? small : big).push_back(pp);
  return {FactoredInteger::from_factors(std::move(small)),
          FactoredInteger::from_factors(std::move(big))};
}

bool is_pseudo_square_free(const PrimePower* f, int count, double threshold, double bound) {
  for (int i = 0; i < count; ++i) {
    if (static_cast<double>(f[i].prime) <= threshold) {
      // p^e <= ln n keeps p^e tiny, so no overflow here.
      double pe = std::pow(static_cast<double>(f[i].prime), f[i].exponent);
      if (pe > bound) return false;
    } else if (f[i].exponent != 1) {
      return false;
    }
  }
  return true;
}

bool is_two_free_above(const PrimePower* f, int count, double threshold) {
  for (int i = 0; i < count; ++i)
    if (f[i].exponent >= 2 && static_cast<double>(f[i].prime) > threshold) return false;
  return true;
}

bool is_separable(const PrimePower* f, int count, double threshold) {
  for (int i = 0; i < count; ++i) {
    u64 p = f[i].prime;
    if (static_cast<double>(p) <= threshold) continue;
    for (int j = 0; j < count; ++j) {
      u64 q = f[j].prime % p;
      u64 qk = 1;
      for (unsigned k = 1; k <= f[j].exponent; ++k) {
        qk = mul_mod(qk, q, p);
        if (qk == 1) return false;
      }
    }
  }
  return true;
}

OrderClassification classify_order(const FactoredInteger& n, std::optional<double> threshold_override,
                                   LogConvention conv) {
  OrderClassification c;
  c.n = n.value();
  c.threshold = threshold_override ? *threshold_override : default_threshold(c.n, conv);
  auto split = split_by_prime_bound(n, c.threshold);
  c.small_part = split.small;
  c.big_part = split.big;
  const auto& f = n.factors();
  int k = static_cast<int>(f.size());
  c.pseudo_square_free = is_pseudo_square_free(f.data(), k, c.threshold, prime_power_bound(c.n));
  c.two_threshold_free = is_two_free_above(f.data(), k, c.threshold);
  c.separable = is_separable(f.data(), k, c.threshold);
  c.in_D = c.pseudo_square_free;
  c.in_Dhat = c.in_D && c.two_threshold_free && c.separable;
  return c;
}

OrderClassification classify_order(u64 n, std::optional<double> threshold_override, LogConvention conv) {
  return classify_order(factorize(n), threshold_override, conv);
}

namespace {

constexpr u64 kSegment = 1 << 15;
constexpr int kMaxFactors = 15;  // 2*3*...*47 already exceeds 2^63
constexpr u64 kMaxLimit = 1'000'000'000'000ULL;

bool member(OrderSet set, u64 n, const PrimePower* f, int count, LogConvention conv) {
  double t = default_threshold(n, conv);
  if (!is_pseudo_square_free(f, count, t, prime_power_bound(n))) return false;
  if (set == OrderSet::D) return true;
  return is_two_free_above(f, count, t) && is_separable(f, count, t);
}

struct SegmentScratch {
  std::vector<u64> rem;
  std::vector<PrimePower> fac;
  std::vector<int> cnt;
  SegmentScratch() : rem(kSegment), fac(kSegment * kMaxFactors), cnt(kSegment) {}
};

// Counts members of the set in [lo, hi).
u64 count_segment(OrderSet set, u64 lo, u64 hi, const std::vector<u64>& primes, LogConvention conv,
                  SegmentScratch& s) {
  u64 len = hi - lo;
  for (u64 i = 0; i < len; ++i) {
    s.rem[i] = lo + i;
    s.cnt[i] = 0;
  }
  for (u64 p : primes) {
    if (p * p >= hi) break;
    u64 start = (lo + p - 1) / p * p;
    for (u64 m = start; m < hi; m += p) {
      u64 i = m - lo;
      unsigned e = 0;
      while (s.rem[i] % p == 0) {
        s.rem[i] /= p;
        ++e;
      }
      s.fac[i * kMaxFactors + s.cnt[i]++] = {p, e};
    }
  }
  u64 count = 0;
  for (u64 i = 0; i < len; ++i) {
    if (s.rem[i] > 1) s.fac[i * kMaxFactors + s.cnt[i]++] = {s.rem[i], 1};
    if (member(set, lo + i, &s.fac[i * kMaxFactors], s.cnt[i], conv)) ++count;
  }
  return count;
}

void check_limit(u64 limit) {
  if (limit == 0) throw std::invalid_argument("density limit must be positive");
  if (limit > kMaxLimit) throw std::invalid_argument("density limit above 10^12 is not supported");
}

std::vector<u64> sieving_primes(u64 limit) {
  return sieve_primes(static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 2);
}

}  // namespace

DensityResult density_scan(OrderSet set, u64 limit, int threads, LogConvention conv) {
  check_limit(limit);
  auto primes = sieving_primes(limit);
  // Segments cover [1, limit]; segment i is [1 + i*S, 1 + (i+1)*S).
  const i64 segments = static_cast<i64>((limit + kSegment - 1) / kSegment);
  u64 total = 0;
#ifdef _OPENMP
  int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt) reduction(+ : total)
  {
    SegmentScratch scratch;
#pragma omp for schedule(dynamic, 4)
    for (i64 seg = 0; seg < segments; ++seg) {
      u64 lo = 1 + static_cast<u64>(seg) * kSegment;
      u64 hi = std::min(lo + kSegment, limit + 1);
      total += count_segment(set, lo, hi, primes, conv, scratch);
    }
  }
#else
  (void)threads;
  SegmentScratch scratch;
  for (i64 seg = 0; seg < segments; ++seg) {
    u64 lo = 1 + static_cast<u64>(seg) * kSegment;
    u64 hi = std::min(lo + kSegment, limit + 1);
    total += count_segment(set, lo, hi, primes, conv, scratch);
  }
#endif
  return {limit, total};
}

DensityResult density_scan_serial(OrderSet set, u64 limit, LogConvention conv) {
  check_limit(limit);
  auto primes = sieving_primes(limit);
  SegmentScratch scratch;
  u64 total = 0;
  for (u64 lo = 1; lo <= limit; lo += kSegment)
    total += count_segment(set, lo, std::min(lo + kSegment, limit + 1), primes, conv, scratch);
  return {limit, total};
}

DensityResult density_scan_reference(OrderSet set, u64 limit, LogConvention conv) {
  check_limit(limit);
  u64 total = 0;
  for (u64 n = 1; n <= limit; ++n) {
    auto c = classify_order(n, std::nullopt, conv);
    if (set == OrderSet::D ? c.in_D : c.in_Dhat) ++total;
  }
  return {limit, total};
}

}  // namespace bbiso
