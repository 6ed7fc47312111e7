#include "bbiso/backend.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bbiso {

std::string Element::encoding() const {
  std::string out;
  out.reserve(words_.size() * 8);
  for (u64 w : words_)
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((w >> (8 * b)) & 0xff));
  return out;
}

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  // splitmix-style mixing over the words
  u64 h = 0x9e3779b97f4a7c15ULL ^ e.size();
  for (u64 w : e.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

namespace {

std::string join_words(const Element& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

}  // namespace

// ---- zmod ----

ZmodBackend::ZmodBackend(std::vector<u64> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw std::invalid_argument("zmod: at least one modulus required");
  for (u64 m : moduli_)
    if (m == 0) throw std::invalid_argument("zmod: moduli must be positive");
}

Element ZmodBackend::make(const std::vector<i64>& residues) const {
  if (residues.size() != moduli_.size()) throw std::invalid_argument("zmod: wrong tuple length");
  std::vector<u64> w(residues.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = reduce_signed(residues[i], moduli_[i]);
  return Element(std::move(w));
}

Element ZmodBackend::identity() const { return Element(std::vector<u64>(moduli_.size(), 0)); }

Element ZmodBackend::multiply(const Element& a, const Element& b) const {
  std::vector<u64> w(moduli_.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    u64 s = a[i] + b[i];
    w[i] = s >= moduli_[i] ? s - moduli_[i] : s;
  }
  return Element(std::move(w));
}

Element ZmodBackend::inverse(const Element& a) const {
  std::vector<u64> w(moduli_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a[i] == 0 ? 0 : moduli_[i] - a[i];
  return Element(std::move(w));
}

bool ZmodBackend::in_bounds(const Element& a) const {
  if (a.size() != moduli_.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] >= moduli_[i]) return false;
  return true;
}

std::string ZmodBackend::format(const Element& a) const { return join_words(a); }

// ---- perm ----

PermBackend::PermBackend(std::size_t degree) : degree_(degree) {
  if (degree == 0) throw std::invalid_argument("perm: degree must be positive");
}

Element PermBackend::make(const std::vector<u64>& images) const {
  if (images.size() != degree_) throw std::invalid_argument("perm: wrong image length");
  std::vector<bool> seen(degree_, false);
  for (u64 x : images) {
    if (x >= degree_ || seen[x]) throw std::invalid_argument("perm: images are not a permutation");
    seen[x] = true;
  }
  return Element(images);
}

Element PermBackend::from_cycles(const std::vector<std::vector<u64>>& cycles) const {
  std::vector<u64> img(degree_);
  std::iota(img.begin(), img.end(), u64{0});
  for (const auto& cyc : cycles)
    for (std::size_t i = 0; i < cyc.size(); ++i) img.at(cyc[i]) = cyc[(i + 1) % cyc.size()];
  return make(img);
}

Element PermBackend::identity() const {
  std::vector<u64> w(degree_);
  std::iota(w.begin(), w.end(), u64{0});
  return Element(std::move(w));
}

Element PermBackend::multiply(const Element& a, const Element& b) const {
  std::vector<u64> w(degree_);
  for (std::size_t i = 0; i < degree_; ++i) w[i] = b[a[i]];
  return Element(std::move(w));
}

Element PermBackend::inverse(const Element& a) const {
  std::vector<u64> w(degree_);
  for (std::size_t i = 0; i < degree_; ++i) w[a[i]] = i;
  return Element(std::move(w));
}

bool PermBackend::in_bounds(const Element& a) const {
  if (a.size() != degree_) return false;
  std::vector<bool> seen(degree_, false);
  for (u64 x : a.words()) {
    if (x >= degree_ || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::string PermBackend::format(const Element& a) const {
  std::ostringstream os;
  std::vector<bool> seen(degree_, false);
  bool any = false;
  for (std::size_t i = 0; i < degree_; ++i) {
    if (seen[i] || a[i] == i) continue;
    any = true;
    os << '(';
    for (u64 j = i; !seen[j]; j = a[j]) {
      seen[j] = true;
      os << (j == i ? "" : " ") << j;
    }
    os << ')';
  }
  return any ? os.str() : "()";
}

// ---- matmod ----

MatmodBackend::MatmodBackend(u64 prime, std::size_t dim) : prime_(prime), dim_(dim) {
  if (!is_prime(prime)) throw std::invalid_argument("matmod: modulus must be prime");
  if (dim == 0) throw std::invalid_argument("matmod: dimension must be positive");
}

Element MatmodBackend::make(const std::vector<std::vector<i64>>& rows) const {
  if (rows.size() != dim_) throw std::invalid_argument("matmod: wrong number of rows");
  std::vector<u64> w;
  w.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_) throw std::invalid_argument("matmod: wrong row length");
    for (i64 x : r) w.push_back(reduce_signed(x, prime_));
  }
  Element e(std::move(w));
  if (determinant(e) == 0) throw std::invalid_argument("matmod: singular matrix");
  return e;
}

u64 MatmodBackend::determinant(const Element& a) const {
  std::vector<u64> m = a.words();
  const std::size_t n = dim_;
  u64 det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
      det = (prime_ - det) % prime_;
    }
    det = mul_mod(det, m[c * n + c], prime_);
    u64 inv = *inverse_mod(m[c * n + c], prime_);
    for (std::size_t r = c + 1; r < n; ++r) {
      u64 f = mul_mod(m[r * n + c], inv, prime_);
      if (f == 0) continue;
      for (std::size_t k = c; k < n; ++k)
        m[r * n + k] = (m[r * n + k] + prime_ - mul_mod(f, m[c * n + k], prime_)) % prime_;
    }
  }
  return det;
}

Element MatmodBackend::identity() const {
  std::vector<u64> w(dim_ * dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i) w[i * dim_ + i] = 1 % prime_;
  return Element(std::move(w));
}

Element MatmodBackend::multiply(const Element& a, const Element& b) const {
  const std::size_t n = dim_;
  std::vector<u64> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      u128 s = 0;
      for (std::size_t k = 0; k < n; ++k) s += static_cast<u128>(a[i * n + k]) * b[k * n + j];
      w[i * n + j] = static_cast<u64>(s % prime_);
    }
  return Element(std::move(w));
}

Element MatmodBackend::inverse(const Element& a) const {
  const std::size_t n = dim_;
  std::vector<u64> m = a.words();
  std::vector<u64> inv = identity().words();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) throw std::domain_error("matmod: singular matrix has no inverse");
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(m[piv * n + k], m[c * n + k]);
      std::swap(inv[piv * n + k], inv[c * n + k]);
    }
    u64 s = *inverse_mod(m[c * n + c], prime_);
    for (std::size_t k = 0; k < n; ++k) {
      m[c * n + k] = mul_mod(m[c * n + k], s, prime_);
      inv[c * n + k] = mul_mod(inv[c * n + k], s, prime_);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r * n + c] == 0) continue;
      u64 f = m[r * n + c];
      for (std::size_t k = 0; k < n; ++k) {
        m[r * n + k] = (m[r * n + k] + prime_ - mul_mod(f, m[c * n + k], prime_)) % prime_;
        inv[r * n + k] = (inv[r * n + k] + prime_ - mul_mod(f, inv[c * n + k], prime_)) % prime_;
      }
    }
  }
  return Element(std::move(inv));
}

bool MatmodBackend::in_bounds(const Element& a) const {
  if (a.size() != dim_ * dim_) return false;
  for (u64 x : a.words())
    if (x >= prime_) return false;
  return determinant(a) != 0;
}

std::string MatmodBackend::format(const Element& a) const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dim_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << a[i * dim_ + j];
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---- semidirect ----

SemidirectBackend::SemidirectBackend(u64 c, u64 d, u64 v) : c_(c), d_(d), v_(d ? v % d : 0) {
  if (c == 0 || d == 0) throw std::invalid_argument("semidirect: c and d must be positive");
  auto inv = inverse_mod(v_, d_);
  if (!inv) throw std::invalid_argument("semidirect: v must be a unit mod d");
  if (pow_mod(v_, c_, d_) != 1 % d_) throw std::invalid_argument("semidirect: v^c must be 1 mod d");
  v_inv_ = *inv;
}

Element SemidirectBackend::make(i64 i, i64 j) const {
  return Element({reduce_signed(i, c_), reduce_signed(j, d_)});
}

Element SemidirectBackend::identity() const { return Element({0, 0}); }

Element SemidirectBackend::multiply(const Element& a, const Element& b) const {
  u64 i = (a[0] + b[0]) % c_;
  u64 j = (mul_mod(a[1], pow_mod(v_, b[0], d_), d_) + b[1]) % d_;
  return Element({i, j});
}

Element SemidirectBackend::inverse(const Element& a) const {
  u64 i = a[0] == 0 ? 0 : c_ - a[0];
  u64 j = mul_mod(a[1], pow_mod(v_inv_, a[0], d_), d_);
  return Element({i, j == 0 ? 0 : d_ - j});
}

bool SemidirectBackend::in_bounds(const Element& a) const {
  return a.size() == 2 && a[0] < c_ && a[1] < d_;
}

std::string SemidirectBackend::format(const Element& a) const {
  return "u^" + std::to_string(a[0]) + " k^" + std::to_string(a[1]);
}

// ---- units ----

UnitsBackend::UnitsBackend(u64 modulus) : modulus_(modulus) {
  if (modulus == 0) throw std::invalid_argument("units: modulus must be positive");
}

Element UnitsBackend::make(u64 residue) const {
  u64 r = residue % modulus_;
  if (std::gcd(r, modulus_) != 1 && modulus_ != 1) throw std::invalid_argument("units: not a unit");
  return Element({r});
}

Element UnitsBackend::identity() const { return Element({1 % modulus_}); }

Element UnitsBackend::multiply(const Element& a, const Element& b) const {
  return Element({mul_mod(a[0], b[0], modulus_)});
}

Element UnitsBackend::inverse(const Element& a) const {
  auto inv = inverse_mod(a[0], modulus_);
  if (!inv) throw std::domain_error("units: element is not invertible");
  return Element({*inv});
}

bool UnitsBackend::in_bounds(const Element& a) const {
  return a.size() == 1 && a[0] < modulus_ && (modulus_ == 1 || std::gcd(a[0], modulus_) == 1);
}

std::string UnitsBackend::format(const Element& a) const { return std::to_string(a[0]); }

}  // namespace bbiso
