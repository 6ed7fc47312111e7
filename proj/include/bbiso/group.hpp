#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bbiso/backend.hpp"
#include "bbiso/errors.hpp"
#include "bbiso/numtheory.hpp"
#include "bbiso/rng.hpp"
#include "bbiso/slp.hpp"

namespace bbiso {

inline constexpr std::size_t kDefaultEnumerationBound = 1'000'000;

// Membership predicate of a normal subgroup N; nullopt means "undefined".
using MembershipPredicate = std::function<std::optional<bool>(const Element&)>;

struct Congruence {
  MembershipPredicate membership;
};

// A group of black-box type: backend operations, generators, an optional
// congruence replacing equality, and an optional known (multiple of the) order.
class GroupHandle {
 public:
  GroupHandle(std::shared_ptr<const Backend> backend, std::vector<Element> generators,
              std::optional<FactoredInteger> known_order = std::nullopt);

  const Backend& backend() const { return *backend_; }
  const std::shared_ptr<const Backend>& backend_ptr() const { return backend_; }
  const std::vector<Element>& generators() const { return generators_; }
  const std::optional<FactoredInteger>& known_order() const { return known_order_; }
  const std::optional<Congruence>& congruence() const { return congruence_; }
  // Equality is byte equality, so elements can be hashed.
  bool hashable() const { return !congruence_.has_value(); }

  Element identity() const { return backend_->identity(); }
  Element multiply(const Element& a, const Element& b) const { return backend_->multiply(a, b); }
  Element inverse(const Element& a) const { return backend_->inverse(a); }
  Element power(const Element& g, u64 k) const;
  Element power_signed(const Element& g, i64 k) const;
  // h^-1 g h
  Element conjugate(const Element& g, const Element& h) const;
  // g^-1 h^-1 g h
  Element commutator(const Element& g, const Element& h) const;

  std::optional<bool> try_equal(const Element& a, const Element& b) const;
  // Throws UndefinedOperation when the congruence is undefined on a^-1 b.
  bool equal(const Element& a, const Element& b) const;
  bool is_identity(const Element& a) const;

  // Same backend and congruence, new generators.
  GroupHandle subgroup(std::vector<Element> generators,
                       std::optional<FactoredInteger> known_order = std::nullopt) const;
  GroupHandle with_known_order(std::optional<FactoredInteger> n) const;
  GroupHandle with_congruence(Congruence c) const;

 private:
  std::shared_ptr<const Backend> backend_;
  std::vector<Element> generators_;
  std::optional<FactoredInteger> known_order_;
  std::optional<Congruence> congruence_;
};

// G/N: same generators and operations, x = y iff N contains x^-1 y.
GroupHandle quotient(const GroupHandle& g, Congruence n);

// Evaluates over G's generators; throws std::out_of_range on a bad index.
Element evaluate_slp(const GroupHandle& g, const Slp& s);
// Evaluates with the given images for the generator symbols.
Element evaluate_slp(const GroupHandle& g, const std::vector<Element>& images, const Slp& s);

// Exact order given a multiple of it; throws PreconditionViolation if
// g^multiple is not the identity.
FactoredInteger element_order(const GroupHandle& g, const Element& x, const FactoredInteger& multiple);
// Uses g.known_order(); throws std::invalid_argument when it is absent.
FactoredInteger element_order(const GroupHandle& g, const Element& x);

// Product replacement with SLP tracking.
class ProductReplacer {
 public:
  ProductReplacer(const GroupHandle& g, Rng& rng, unsigned burn_in = 50);
  std::pair<Element, Slp> next();

 private:
  void step();

  GroupHandle group_;
  Rng& rng_;
  std::vector<Element> slots_;
  std::vector<Slp> words_;
  Element acc_;
  Slp acc_word_;
};

// One product-replacement sample with a fresh slot table.
std::pair<Element, Slp> random_element(const GroupHandle& g, Rng& rng);

// Element lookup honouring the group's equality (hash table when possible,
// linear scan under a congruence).
class ElementIndex {
 public:
  explicit ElementIndex(const GroupHandle& g) : group_(g) {}

  std::optional<std::size_t> find(const Element& x) const;
  // Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Element& x);
  std::size_t size() const { return elements_.size(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const& { return elements_; }
  std::vector<Element> elements() && { return std::move(elements_); }

 private:
  GroupHandle group_;
  std::vector<Element> elements_;
  std::unordered_map<Element, std::size_t, ElementHash> map_;
};

// All elements of <gens>, identity first, in breadth-first discovery order.
ElementIndex enumerate_span(const GroupHandle& g, const std::vector<Element>& gens,
                            std::size_t bound = kDefaultEnumerationBound);

std::vector<Element> normal_closure(const GroupHandle& g, const std::vector<Element>& seeds,
                                    std::size_t bound = kDefaultEnumerationBound);

GroupHandle derived_subgroup(const GroupHandle& g, std::size_t bound = kDefaultEnumerationBound);

// True iff every pair of generators commutes.
bool generators_commute(const GroupHandle& g);

}  // namespace bbiso
