#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bbiso {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

// Throws std::overflow_error when the product does not fit in 64 bits.
u64 checked_mul(u64 a, u64 b);
u64 checked_pow(u64 base, unsigned exp);

struct Bezout {
  i64 g;
  i64 s;
  i64 t;  // s*a + t*b = g
};
Bezout extended_gcd(i64 a, i64 b);

std::optional<u64> inverse_mod(u64 a, u64 m);

// Reduces a signed value into [0, m).
u64 reduce_signed(i64 x, u64 m);

// Deterministic for all 64-bit inputs.
bool is_prime(u64 n);

struct PrimePower {
  u64 prime;
  unsigned exponent;

  u64 value() const { return checked_pow(prime, exponent); }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class FactoredInteger {
 public:
  FactoredInteger() = default;  // the integer 1

  // Validates primality, ordering and exponents; throws std::invalid_argument.
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  u64 value() const { return value_; }
  const std::vector<PrimePower>& factors() const& { return factors_; }
  std::vector<PrimePower> factors() && { return std::move(factors_); }
  std::vector<u64> primes() const;

  unsigned valuation(u64 p) const;
  u64 prime_power_part(u64 p) const;
  // value / p^valuation(p)
  FactoredInteger without_prime(u64 p) const;
  FactoredInteger prime_power(u64 p) const;

  // Exact division by a divisor whose primes all appear here.
  FactoredInteger divide(const FactoredInteger& d) const;
  bool divides(const FactoredInteger& other) const;
  // Factor a divisor of value() using only the known primes.
  FactoredInteger factor_divisor(u64 d) const;

  bool is_one() const { return factors_.empty(); }
  bool is_prime_power() const { return factors_.size() == 1; }
  bool is_square_free() const;

  FactoredInteger operator*(const FactoredInteger& o) const;
  friend bool operator==(const FactoredInteger& a, const FactoredInteger& b) {
    return a.factors_ == b.factors_;
  }

  std::string to_string() const;

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

FactoredInteger gcd(const FactoredInteger& a, const FactoredInteger& b);

std::vector<u64> sieve_primes(u64 limit);

// Trial division to 10^6, then Pollard rho with Miller-Rabin.
FactoredInteger factorize(u64 n);

// Largest exponent in the factorization; mu(1) = 0.
unsigned mu(const FactoredInteger& n);

u64 euler_phi(const FactoredInteger& n);

// Multiplicative order of a modulo m, a coprime to m.
u64 multiplicative_order(u64 a, u64 m);

}  // namespace bbiso
