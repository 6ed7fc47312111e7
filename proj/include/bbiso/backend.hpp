#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "bbiso/numtheory.hpp"

namespace bbiso {

// Opaque group element: a flat word vector interpreted by its backend. Two
// elements of a base backend are equal iff their words are equal.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<u64> words) : words_(std::move(words)) {}

  const std::vector<u64>& words() const { return words_; }
  u64 operator[](std::size_t i) const { return words_[i]; }
  std::size_t size() const { return words_.size(); }

  // Canonical byte encoding: 8 little-endian bytes per word.
  std::string encoding() const;

  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::vector<u64> words_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string kind() const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  virtual bool in_bounds(const Element& a) const = 0;
  virtual std::string format(const Element& a) const = 0;
};

// Z/d1 x ... x Z/ds, componentwise addition.
class ZmodBackend final : public Backend {
 public:
  explicit ZmodBackend(std::vector<u64> moduli);

  const std::vector<u64>& moduli() const { return moduli_; }
  Element make(const std::vector<i64>& residues) const;

  std::string kind() const override { return "zmod"; }
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool in_bounds(const Element& a) const override;
  std::string format(const Element& a) const override;

 private:
  std::vector<u64> moduli_;
};

// Permutations of {0..m-1}; a*b applies a first, then b.
class PermBackend final : public Backend {
 public:
  explicit PermBackend(std::size_t degree);

  std::size_t degree() const { return degree_; }
  // Throws std::invalid_argument unless images form a permutation.
  Element make(const std::vector<u64>& images) const;
  Element from_cycles(const std::vector<std::vector<u64>>& cycles) const;

  std::string kind() const override { return "perm"; }
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool in_bounds(const Element& a) const override;
  std::string format(const Element& a) const override;

 private:
  std::size_t degree_;
};

// Invertible dim x dim matrices over Z/p, row-major, ordinary product.
class MatmodBackend final : public Backend {
 public:
  MatmodBackend(u64 prime, std::size_t dim);

  u64 prime() const { return prime_; }
  std::size_t dim() const { return dim_; }
  // Throws std::invalid_argument for singular or malformed input.
  Element make(const std::vector<std::vector<i64>>& rows) const;
  u64 determinant(const Element& a) const;

  std::string kind() const override { return "matmod"; }
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool in_bounds(const Element& a) const override;
  std::string format(const Element& a) const override;

 private:
  u64 prime_;
  std::size_t dim_;
};

// Z/c x| Z/d as pairs (i, j) standing for u^i k^j with u^-1 k u = k^v.
class SemidirectBackend final : public Backend {
 public:
  // Requires gcd(v, d) = 1 and v^c = 1 mod d.
  SemidirectBackend(u64 c, u64 d, u64 v);

  u64 c() const { return c_; }
  u64 d() const { return d_; }
  u64 v() const { return v_; }
  Element make(i64 i, i64 j) const;

  std::string kind() const override { return "semidirect"; }
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool in_bounds(const Element& a) const override;
  std::string format(const Element& a) const override;

 private:
  u64 c_, d_, v_, v_inv_;
};

// The unit group (Z/m)^x under multiplication.
class UnitsBackend final : public Backend {
 public:
  explicit UnitsBackend(u64 modulus);

  u64 modulus() const { return modulus_; }
  Element make(u64 residue) const;

  std::string kind() const override { return "units"; }
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool in_bounds(const Element& a) const override;
  std::string format(const Element& a) const override;

 private:
  u64 modulus_;
};

}  // namespace bbiso
