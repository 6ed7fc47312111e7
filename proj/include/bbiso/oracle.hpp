#pragma once

#include <cstdint>
#include <vector>

#include "bbiso/group.hpp"

namespace bbiso {

inline constexpr std::size_t kDefaultTableBound = 200;

// Multiplication table of a small group; label 0 is the identity and labels
// follow breadth-first discovery from the identity.
class CayleyTable {
 public:
  using Label = std::uint32_t;

  CayleyTable(std::vector<Label> table, std::vector<Label> generators);

  std::size_t order() const { return order_; }
  Label mul(Label a, Label b) const { return table_[a * order_ + b]; }
  Label inv(Label a) const { return inverse_[a]; }
  const std::vector<Label>& generators() const { return generators_; }
  const std::vector<Label>& table() const { return table_; }
  std::size_t element_order(Label a) const { return orders_[a]; }

  bool is_commutative() const;
  // Identity row/column, Latin square, associativity.
  bool is_valid_group() const;

 private:
  std::size_t order_;
  std::vector<Label> table_;
  std::vector<Label> generators_;
  std::vector<Label> inverse_;
  std::vector<std::size_t> orders_;
};

struct EnumeratedGroup {
  CayleyTable table;
  std::vector<Element> elements;  // elements[label]
};

// Throws EnumerationBoundExceeded if |G| > bound.
EnumeratedGroup enumerate_group(const GroupHandle& g, std::size_t bound = kDefaultTableBound);
inline CayleyTable enumerate(const GroupHandle& g, std::size_t bound = kDefaultTableBound) {
  return enumerate_group(g, bound).table;
}

// Exact isomorphism test: minimal generating tuple of t1, then a search over
// order-compatible image tuples in t2 with homomorphism extension.
bool brute_force_iso(const CayleyTable& t1, const CayleyTable& t2);

// Characteristic vector of <subset>.
std::vector<bool> exhaustive_membership(const CayleyTable& t, const std::vector<CayleyTable::Label>& subset);

// A generating tuple of minimum size, lexicographically least among those.
std::vector<CayleyTable::Label> minimal_generating_tuple(const CayleyTable& t);

}  // namespace bbiso
