#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "bbiso/group.hpp"

namespace bbiso {

// Independent elements spanning <x1> x ... x <xs>. words[i] is an SLP over
// the generators of the group the basis was built for (may be empty when the
// basis was supplied directly).
struct Basis {
  std::vector<Element> elements;
  std::vector<FactoredInteger> orders;
  std::vector<Slp> words;

  std::size_t size() const { return elements.size(); }
  FactoredInteger span_order() const;
};

// Orders form a divisor chain d1 | d2 | ... | ds with every di >= 2.
struct CanonicalBasis : Basis {
  std::vector<u64> invariants() const;
};

using Exponents = std::vector<u64>;

// Layered baby-step giant-step solver for one p-group basis. Baby-step tables
// are built lazily and cached per active prefix.
class PGroupEdl {
 public:
  PGroupEdl(const GroupHandle& g, const Basis& basis);
  std::optional<Exponents> solve(const Element& target) const;

 private:
  struct Table;
  const Table& table(std::size_t active) const;
  std::optional<std::vector<u64>> solve_digits(std::size_t active, const Element& target) const;

  GroupHandle group_;
  u64 p_ = 0;
  u64 step_ = 1;                          // ceil(sqrt p)
  std::vector<std::size_t> order_;        // basis indices by decreasing exponent
  std::vector<unsigned> exps_;            // exponent of each basis element
  std::vector<Element> elements_;
  std::vector<Element> roots_;            // x_i^(p^(e_i - 1)), order p
  std::vector<Element> giant_;            // roots_^(-step)
  unsigned max_exp_ = 0;
  mutable std::map<std::size_t, std::shared_ptr<Table>> tables_;
};

// Solves over a basis of arbitrary order by projecting to each prime and
// recombining with the CRT.
class EdlSolver {
 public:
  EdlSolver(const GroupHandle& g, const Basis& basis, const FactoredInteger& span_order);
  std::optional<Exponents> solve(const Element& target) const;

 private:
  GroupHandle group_;
  Basis basis_;
  FactoredInteger span_order_;
  struct PrimePart {
    u64 p;
    u64 cofactor;  // span_order / p^e
    std::vector<u64> moduli;  // p-part of each basis order
    std::vector<std::size_t> active;  // basis indices with nontrivial p-part
    std::unique_ptr<PGroupEdl> solver;
  };
  std::vector<PrimePart> parts_;
};

// Throws std::invalid_argument if the basis orders are not powers of one prime.
std::optional<Exponents> edl_p_group(const GroupHandle& g, const Basis& basis, const Element& target);
std::optional<Exponents> edl(const GroupHandle& g, const Basis& basis, const FactoredInteger& span_order,
                             const Element& target);

// Canonical basis of an abelian group G with |G| dividing n. Throws
// NonAbelianInput when the sifting data is inconsistent with commutativity.
CanonicalBasis canonical_basis(const GroupHandle& g, const FactoredInteger& n);

class OneWayIso {
 public:
  OneWayIso(GroupHandle g, std::vector<u64> moduli, std::vector<Element> images);

  const std::vector<u64>& moduli() const { return moduli_; }
  const GroupHandle& group() const { return group_; }
  // Nothing if the tuple has the wrong length.
  std::optional<Element> forward(const Exponents& t) const;

 private:
  GroupHandle group_;
  std::vector<u64> moduli_;
  std::vector<Element> images_;
};

class TwoWayIso {
 public:
  TwoWayIso(GroupHandle g, CanonicalBasis basis);

  const GroupHandle& group() const { return group_; }
  const CanonicalBasis& basis() const { return basis_; }
  const std::vector<u64>& moduli() const { return moduli_; }
  std::optional<Element> forward(const Exponents& t) const;
  // Nothing for elements outside G.
  std::optional<Exponents> inverse(const Element& x) const;

 private:
  GroupHandle group_;
  CanonicalBasis basis_;
  std::vector<u64> moduli_;
  std::shared_ptr<EdlSolver> solver_;
};

TwoWayIso abel_recog_2(const GroupHandle& g, const FactoredInteger& n);

// Compares the small-prime parts A = <s^b>; throws std::invalid_argument on an
// order mismatch, and NonAbelianInput in strict mode if generators do not commute.
bool iso_abelian(const GroupHandle& g, const GroupHandle& h, const FactoredInteger& n, double threshold,
                 bool strict = false);

// Element of exact order b by random sampling; throws LasVegasExhausted.
Element cyclic_generator_random(const GroupHandle& b_group, const FactoredInteger& b, Rng& rng,
                                unsigned max_tries);
Element cyclic_generator_random(const GroupHandle& b_group, const FactoredInteger& b, Rng& rng,
                                const LasVegasBudget& budget = {});

using MembershipTest = std::function<std::optional<Slp>(const Element&)>;

// Returned SLPs are over the generators of iso.group().
MembershipTest membership_from_iso(const TwoWayIso& iso);

// Generators, relators and the maps phi (symbols to elements) and psi
// (elements to words over the symbols). For a presentation of G/N, relators
// evaluate into N and x^-1 * phi(psi(x)) lies in N.
struct ConstructivePresentation {
  GroupHandle group;
  std::vector<Element> images;  // phi on symbols
  std::vector<Slp> relators;
  std::function<std::optional<Slp>(const Element&)> rewrite;  // psi

  std::size_t symbols() const { return images.size(); }
  Element lift(const Slp& w) const { return evaluate_slp(group, images, w); }
};

ConstructivePresentation presentation_from_iso(const TwoWayIso& iso);

}  // namespace bbiso
