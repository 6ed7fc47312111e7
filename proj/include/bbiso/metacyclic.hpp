#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bbiso/abelian.hpp"
#include "bbiso/order_analysis.hpp"

namespace bbiso {

// Predicate g -> (g^d = 1). Only a congruence when G has a unique Hall
// subgroup of order d; the caller establishes that.
Congruence hall_membership(const GroupHandle& g, const FactoredInteger& d);

// Derived series with a two-way iso on every abelian layer and the stitched
// presentation. Symbols of layer i are offsets[i] .. offsets[i+1]-1.
struct SolvableData {
  std::vector<GroupHandle> series;  // N_1 .. N_{l+1}, the last one trivial
  std::vector<TwoWayIso> layers;    // N_i / N_{i+1}
  std::vector<std::size_t> offsets;
  ConstructivePresentation presentation;
  // SLP over the presentation symbols, Nothing for non-members.
  MembershipTest membership;
  FactoredInteger order;  // the n this was built for

  std::size_t length() const { return layers.size(); }
  // Constructive membership in N_level.
  std::optional<Slp> sift(std::size_t level, const Element& x) const;
};

// Nothing when the derived series stalls or runs past ceil(log2 n) steps.
std::optional<SolvableData> solvable_data(const GroupHandle& g, const FactoredInteger& n,
                                          std::size_t bound = kDefaultEnumerationBound);

// Generators of the normal subgroup B for a presentation of G/B: relators
// evaluated at the lifted symbols, plus s^-1 * psi(s) for every generator s
// of G (these are needed when the lifts do not generate G).
std::vector<Element> cyclic_normal_generators(const GroupHandle& g, const ConstructivePresentation& pres);

// Generators of the unique Sylow p-subgroup of N_level, or Nothing.
std::optional<std::vector<Element>> normal_sylow(const SolvableData& data, u64 p, std::size_t level = 0,
                                                 std::size_t bound = kDefaultEnumerationBound);

struct MetacyclicDecomposition {
  FactoredInteger c;
  FactoredInteger d;
  Element u_generator;
  Element k_generator;
  Element big_generator;                            // generator of B
  std::vector<std::pair<u64, Element>> sylow_generators;  // x_p for p in S
  OneWayIso beta;                                   // Z/d -> K
  TwoWayIso alpha;                                  // Z/c -> U
  u64 action_v = 1;                                 // u^-1 k u = k^v
};

enum class RefusalReason {
  non_solvable,
  non_cyclic_sylow,
  non_cyclic_kernel,
  non_cyclic_top,
  order_mismatch,
  las_vegas_exhausted,
};
std::string to_string(RefusalReason r);

struct NotMetacyclic {
  RefusalReason reason;
  std::string detail;
};

using Recognition = std::variant<MetacyclicDecomposition, NotMetacyclic>;

// threshold defaults to default_threshold(n).
Recognition recognize_coprime_metacyclic(const GroupHandle& g, const FactoredInteger& n,
                                         std::optional<double> threshold, Rng& rng,
                                         const LasVegasBudget& budget = {});

struct DeconjugateStep {
  u64 a;  // prime power p^e
  u64 b;  // prime power q^f
  u64 unit;  // k of order p^h, or 1
  u64 result;
};

// v mod b with x^-1 y x = y^v. Requires x^a = 1, |y| = b, gcd(a,b) = 1 and
// y^x in <y>. Base cases are appended to trace in the order they run.
u64 deconjugate(const GroupHandle& g, const Element& x, const Element& y, const FactoredInteger& a,
                const FactoredInteger& b, Rng& rng, const LasVegasBudget& budget = {},
                std::vector<DeconjugateStep>* trace = nullptr);

u64 deconjugate_prime_powers(const GroupHandle& g, const Element& x, const Element& y, PrimePower a,
                             PrimePower b, Rng& rng, const LasVegasBudget& budget = {},
                             std::vector<DeconjugateStep>* trace = nullptr);

struct NotCoprimeMetacyclic : std::runtime_error {
  NotCoprimeMetacyclic(int which, NotMetacyclic why);
  int which;  // 0 or 1
  NotMetacyclic why;
};

// Throws NotCoprimeMetacyclic naming the input that failed recognition.
bool iso_metacyclic(const GroupHandle& g, const GroupHandle& h, const FactoredInteger& n,
                    std::optional<double> threshold, Rng& rng, const LasVegasBudget& budget = {});

// Same test on already recognized groups.
bool same_action_image(const MetacyclicDecomposition& x, const MetacyclicDecomposition& y);

// (m mod a, 1) with gcd(m,a) = 1 and ell_tilde^m = ell mod b, when
// <ell> = <ell_tilde> in (Z/b)^x.
std::optional<std::pair<u64, u64>> standard_iso_witness(const FactoredInteger& a, const FactoredInteger& b,
                                                        u64 ell, u64 ell_tilde);

}  // namespace bbiso
