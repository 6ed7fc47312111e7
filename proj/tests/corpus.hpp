// Small groups used across the test binaries.
#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "bbiso/group.hpp"

namespace corpus {

using namespace bbiso;

inline GroupHandle zmod(std::vector<u64> moduli, std::vector<std::vector<i64>> gens) {
  auto b = std::make_shared<ZmodBackend>(moduli);
  std::vector<Element> e;
  for (auto& g : gens) e.push_back(b->make(g));
  return GroupHandle(b, e);
}

inline GroupHandle perm(u64 degree, const std::vector<std::vector<u64>>& gens) {
  auto b = std::make_shared<PermBackend>(degree);
  std::vector<Element> e;
  for (auto& g : gens) e.push_back(b->make(g));
  return GroupHandle(b, e);
}

inline GroupHandle with_order(GroupHandle g, u64 n) { return g.with_known_order(factorize(n)); }

inline GroupHandle s3() { return with_order(perm(3, {{1, 2, 0}, {1, 0, 2}}), 6); }
inline GroupHandle a4() { return with_order(perm(4, {{1, 2, 0, 3}, {1, 0, 3, 2}}), 12); }
inline GroupHandle a5() { return with_order(perm(5, {{1, 2, 3, 4, 0}, {1, 2, 0, 3, 4}}), 60); }
inline GroupHandle d4() { return with_order(perm(4, {{1, 2, 3, 0}, {3, 2, 1, 0}}), 8); }
inline GroupHandle s3xz2() { return with_order(perm(5, {{1, 2, 0, 3, 4}, {1, 0, 2, 3, 4}, {0, 1, 2, 4, 3}}), 12); }

// Regular representation of Q8 on {±1,±i,±j,±k} = 0..7 (1,i,j,k,-1,-i,-j,-k).
inline GroupHandle q8() {
  // right multiplication by i and by j
  const int mul_table[4][4] = {{0, 1, 2, 3}, {1, 4, 3, 6}, {2, 7, 4, 1}, {3, 2, 5, 4}};
  auto right = [&](int s) {
    std::vector<u64> img(8);
    for (int x = 0; x < 8; ++x) {
      int base = x % 4, sign = x / 4;
      int r = mul_table[base][s];
      img[x] = static_cast<u64>((r % 4) + 4 * ((sign + r / 4) % 2));
    }
    return img;
  };
  return with_order(perm(8, {right(1), right(2)}), 8);
}

// Z/c x| Z/d with u^-1 k u = k^v, residue-pair backend; generators u, k.
inline GroupHandle semidirect(u64 c, u64 d, u64 v) {
  auto b = std::make_shared<SemidirectBackend>(c, d, v);
  return GroupHandle(b, {b->make(1, 0), b->make(0, 1)}, factorize(c * d));
}

// Same group on d + c points: k = (i -> i+1) on Z/d, u = (i -> v i) on Z/d
// times a c-cycle on the extra points.
inline GroupHandle semidirect_perm(u64 c, u64 d, u64 v) {
  std::vector<u64> u(d + c), k(d + c);
  for (u64 i = 0; i < d; ++i) {
    u[i] = (v * i) % d;
    k[i] = (i + 1) % d;
  }
  for (u64 i = 0; i < c; ++i) {
    u[d + i] = d + (i + 1) % c;
    k[d + i] = d + i;
  }
  return with_order(perm(d + c, {u, k}), c * d);
}

// Abelian group with the given invariants as a residue tuple group, with
// the standard generators, optionally mixed and padded with redundant ones.
inline GroupHandle abelian(const std::vector<u64>& invariants, int variant = 0) {
  std::vector<u64> moduli = invariants;
  if (moduli.empty()) moduli = {1};
  const std::size_t s = moduli.size();
  std::vector<std::vector<i64>> gens;
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<i64> g(s, 0);
    g[i] = 1;
    gens.push_back(g);
  }
  if (variant >= 1) {
    // unimodular mix: e_i + e_{i+1}
    for (std::size_t i = 0; i + 1 < s; ++i) gens[i][i + 1] = 1;
  }
  if (variant >= 2) {
    // redundant sums and doubles
    std::vector<i64> all(s, 1), twice(s, 2);
    gens.push_back(all);
    gens.push_back(twice);
  }
  if (variant >= 3) std::reverse(gens.begin(), gens.end());
  u64 n = 1;
  for (u64 m : moduli) n *= m;
  return with_order(zmod(moduli, gens), n);
}

// Invariant-factor lists d1 | d2 | ... for every abelian group of order n.
inline std::vector<std::vector<u64>> abelian_types(u64 n) {
  // partitions per prime, combined into invariant factors
  std::vector<std::vector<std::vector<unsigned>>> per_prime;
  auto f = factorize(n);
  std::vector<u64> primes = f.primes();
  for (const auto& pp : f.factors()) {
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> cur;
    std::function<void(unsigned, unsigned)> gen = [&](unsigned left, unsigned max) {
      if (left == 0) {
        parts.push_back(cur);
        return;
      }
      for (unsigned k = std::min(left, max); k >= 1; --k) {
        cur.push_back(k);
        gen(left - k, k);
        cur.pop_back();
      }
    };
    gen(pp.exponent, pp.exponent);
    per_prime.push_back(parts);
  }
  std::vector<std::vector<u64>> out;
  std::vector<std::size_t> idx(per_prime.size(), 0);
  if (per_prime.empty()) return {{}};
  while (true) {
    std::size_t len = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) len = std::max(len, per_prime[i][idx[i]].size());
    std::vector<u64> inv(len, 1);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& part = per_prime[i][idx[i]];  // descending
      for (std::size_t j = 0; j < part.size(); ++j) inv[len - 1 - j] *= checked_pow(primes[i], part[j]);
    }
    out.push_back(inv);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_prime[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace corpus
