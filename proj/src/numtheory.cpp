#include "bbiso/numtheory.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bbiso {

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in 64-bit product");
  return r;
}

u64 checked_pow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

Bezout extended_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  // Work in 128 bits so moduli up to 2^63 are safe.
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return std::nullopt;
  __int128 mm = m;
  old_s %= mm;
  if (old_s < 0) old_s += mm;
  return static_cast<u64>(old_s);
}

u64 reduce_signed(i64 x, u64 m) {
  __int128 r = static_cast<__int128>(x) % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  FactoredInteger f;
  u64 prev = 0;
  for (const auto& pp : factors) {
    if (pp.exponent == 0) throw std::invalid_argument("zero exponent in factorization");
    if (pp.prime <= prev) throw std::invalid_argument("primes must be strictly increasing");
    if (!is_prime(pp.prime))
      throw std::invalid_argument("non-prime " + std::to_string(pp.prime) + " in factorization");
    f.value_ = checked_mul(f.value_, pp.value());
    prev = pp.prime;
  }
  f.factors_ = std::move(factors);
  return f;
}

std::vector<u64> FactoredInteger::primes() const {
  std::vector<u64> out;
  for (const auto& pp : factors_) out.push_back(pp.prime);
  return out;
}

unsigned FactoredInteger::valuation(u64 p) const {
  for (const auto& pp : factors_)
    if (pp.prime == p) return pp.exponent;
  return 0;
}

u64 FactoredInteger::prime_power_part(u64 p) const { return checked_pow(p, valuation(p)); }

FactoredInteger FactoredInteger::without_prime(u64 p) const {
  std::vector<PrimePower> rest;
  for (const auto& pp : factors_)
    if (pp.prime != p) rest.push_back(pp);
  return from_factors(std::move(rest));
}

FactoredInteger FactoredInteger::prime_power(u64 p) const {
  unsigned e = valuation(p);
  if (e == 0) return {};
  return from_factors({{p, e}});
}

FactoredInteger FactoredInteger::divide(const FactoredInteger& d) const {
  std::vector<PrimePower> out;
  for (const auto& pp : factors_) {
    unsigned e = d.valuation(pp.prime);
    if (e > pp.exponent) throw std::invalid_argument("divide: not a divisor");
    if (pp.exponent > e) out.push_back({pp.prime, pp.exponent - e});
  }
  for (const auto& pp : d.factors_)
    if (valuation(pp.prime) == 0) throw std::invalid_argument("divide: not a divisor");
  return from_factors(std::move(out));
}

bool FactoredInteger::divides(const FactoredInteger& other) const {
  for (const auto& pp : factors_)
    if (other.valuation(pp.prime) < pp.exponent) return false;
  return true;
}

FactoredInteger FactoredInteger::factor_divisor(u64 d) const {
  if (d == 0 || value_ % d != 0) throw std::invalid_argument("factor_divisor: not a divisor");
  std::vector<PrimePower> out;
  for (const auto& pp : factors_) {
    unsigned e = 0;
    while (d % pp.prime == 0) {
      d /= pp.prime;
      ++e;
    }
    if (e > 0) out.push_back({pp.prime, e});
  }
  return from_factors(std::move(out));
}

bool FactoredInteger::is_square_free() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

FactoredInteger FactoredInteger::operator*(const FactoredInteger& o) const {
  std::map<u64, unsigned> m;
  for (const auto& pp : factors_) m[pp.prime] += pp.exponent;
  for (const auto& pp : o.factors_) m[pp.prime] += pp.exponent;
  std::vector<PrimePower> out;
  for (auto [p, e] : m) out.push_back({p, e});
  return from_factors(std::move(out));
}

std::string FactoredInteger::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " * ";
    os << factors_[i].prime;
    if (factors_[i].exponent > 1) os << '^' << factors_[i].exponent;
  }
  return os.str();
}

FactoredInteger gcd(const FactoredInteger& a, const FactoredInteger& b) {
  std::vector<PrimePower> out;
  for (const auto& pp : a.factors()) {
    unsigned e = std::min(pp.exponent, b.valuation(pp.prime));
    if (e > 0) out.push_back({pp.prime, e});
  }
  return FactoredInteger::from_factors(std::move(out));
}

std::vector<u64> sieve_primes(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void split_large(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  u64 d = pollard_rho(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

FactoredInteger factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::map<u64, unsigned> m;
  for (u64 p = 2; p <= 1000000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      m[p] += 1;
      n /= p;
    }
  }
  if (n > 1) split_large(n, m);
  std::vector<PrimePower> out;
  for (auto [p, e] : m) out.push_back({p, e});
  return FactoredInteger::from_factors(std::move(out));
}

unsigned mu(const FactoredInteger& n) {
  unsigned best = 0;
  for (const auto& pp : n.factors()) best = std::max(best, pp.exponent);
  return best;
}

u64 euler_phi(const FactoredInteger& n) {
  u64 r = 1;
  for (const auto& pp : n.factors())
    r = checked_mul(r, checked_mul(pp.prime - 1, checked_pow(pp.prime, pp.exponent - 1)));
  return r;
}

u64 multiplicative_order(u64 a, u64 m) {
  if (m == 1) return 1;
  if (std::gcd(a % m, m) != 1) throw std::invalid_argument("multiplicative_order: not a unit");
  u64 ord = euler_phi(factorize(m));
  const auto fo = factorize(ord);
  for (const auto& pp : fo.factors()) {
    for (unsigned i = 0; i < pp.exponent; ++i) {
      if (pow_mod(a, ord / pp.prime, m) == 1)
        ord /= pp.prime;
      else
        break;
    }
  }
  return ord;
}

}  // namespace bbiso
