#include "bbiso/metacyclic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bbiso {

Congruence hall_membership(const GroupHandle& g, const FactoredInteger& d) {
  u64 e = d.value();
  return Congruence{[g, e](const Element& x) -> std::optional<bool> { return g.is_identity(g.power(x, e)); }};
}

namespace {

Slp word_from_exponents(const Exponents& t, std::size_t offset) {
  std::vector<Slp> parts;
  for (std::size_t j = 0; j < t.size(); ++j)
    if (t[j]) parts.push_back(Slp::power(Slp::generator(offset + j), static_cast<i64>(t[j])));
  return Slp::product_of(parts);
}

// Walks down the layers from `level`, dividing out each layer's witness.
std::optional<Slp> sift_layers(const std::vector<GroupHandle>& series, const std::vector<TwoWayIso>& layers,
                               const std::vector<std::size_t>& offsets, const std::vector<Element>& images,
                               std::size_t level, const Element& x) {
  const GroupHandle& top = series.front();
  std::vector<Slp> word;
  Element rest = x;
  for (std::size_t i = level; i < layers.size(); ++i) {
    auto t = layers[i].inverse(rest);
    if (!t) return std::nullopt;
    Slp w = word_from_exponents(*t, offsets[i]);
    rest = top.multiply(top.inverse(evaluate_slp(top, images, w)), rest);
    word.push_back(std::move(w));
  }
  if (!top.is_identity(rest)) return std::nullopt;
  return Slp::product_of(word);
}

}  // namespace

std::optional<Slp> SolvableData::sift(std::size_t level, const Element& x) const {
  return sift_layers(series, layers, offsets, presentation.images, level, x);
}

std::optional<SolvableData> solvable_data(const GroupHandle& g, const FactoredInteger& n, std::size_t bound) {
  std::size_t max_steps = 1;
  while ((u64{1} << max_steps) < n.value() && max_steps < 63) ++max_steps;

  std::vector<GroupHandle> series{g};
  std::vector<std::shared_ptr<ElementIndex>> spans{
      std::make_shared<ElementIndex>(enumerate_span(g, g.generators(), bound))};
  while (spans.back()->size() > 1) {
    if (series.size() > max_steps) return std::nullopt;
    GroupHandle next = derived_subgroup(series.back(), bound);
    auto span = std::make_shared<ElementIndex>(enumerate_span(g, next.generators(), bound));
    if (span->size() == spans.back()->size()) return std::nullopt;
    series.push_back(next);
    spans.push_back(span);
  }

  SolvableData data{series, {}, {}, {g, {}, {}, {}}, {}, n};
  std::vector<Element>& images = data.presentation.images;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    GroupHandle layer = series[i];
    if (i + 2 < series.size()) {
      auto below = spans[i + 1];
      layer = series[i].with_congruence(
          Congruence{[below](const Element& x) -> std::optional<bool> { return below->find(x).has_value(); }});
    }
    data.offsets.push_back(images.size());
    data.layers.push_back(abel_recog_2(layer, n));
    for (const auto& e : data.layers.back().basis().elements) images.push_back(e);
  }
  data.offsets.push_back(images.size());

  // Relators of the polycyclic presentation, bottom layer first in the sense
  // that each tail is a word in deeper symbols.
  auto tail = [&](std::size_t level, const Element& x) {
    auto w = data.sift(level, x);
    if (!w) throw PreconditionViolation("solvable_data: layer element not recognised below");
    return Slp::inverse(*w);
  };
  auto& rel = data.presentation.relators;
  for (std::size_t i = 0; i < data.layers.size(); ++i) {
    const auto& moduli = data.layers[i].moduli();
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      std::size_t sj = data.offsets[i] + j;
      Slp xj = Slp::generator(sj);
      Slp pw = Slp::power(xj, static_cast<i64>(moduli[j]));
      rel.push_back(Slp::product(pw, tail(i + 1, g.power(images[sj], moduli[j]))));
      for (std::size_t k = j + 1; k < moduli.size(); ++k) {
        std::size_t sk = data.offsets[i] + k;
        Slp xk = Slp::generator(sk);
        Slp comm = Slp::product_of({Slp::inverse(xj), Slp::inverse(xk), xj, xk});
        rel.push_back(Slp::product(comm, tail(i + 1, g.commutator(images[sj], images[sk]))));
      }
      // conjugates of deeper symbols
      for (std::size_t i2 = i + 1; i2 < data.layers.size(); ++i2)
        for (std::size_t s = data.offsets[i2]; s < data.offsets[i2 + 1]; ++s) {
          Slp z = Slp::generator(s);
          Slp conj = Slp::product_of({Slp::inverse(xj), z, xj});
          rel.push_back(Slp::product(conj, tail(i2, g.conjugate(images[s], images[sj]))));
        }
    }
  }

  auto series_copy = data.series;
  auto layers_copy = data.layers;
  auto offsets_copy = data.offsets;
  auto images_copy = images;
  data.membership = [=](const Element& x) {
    return sift_layers(series_copy, layers_copy, offsets_copy, images_copy, 0, x);
  };
  data.presentation.rewrite = data.membership;
  return data;
}

std::vector<Element> cyclic_normal_generators(const GroupHandle& g, const ConstructivePresentation& pres) {
  std::vector<Element> lifts;
  for (const auto& x : pres.images) {
    auto w = pres.rewrite(x);
    if (!w) throw PreconditionViolation("cyclic_normal_generators: symbol image not rewritable");
    lifts.push_back(evaluate_slp(g, pres.images, *w));
  }
  std::vector<Element> out;
  auto keep = [&](const Element& e) {
    if (!g.is_identity(e)) out.push_back(e);
  };
  for (const auto& r : pres.relators) keep(evaluate_slp(g, lifts, r));
  for (const auto& s : g.generators()) {
    auto w = pres.rewrite(s);
    if (!w) throw PreconditionViolation("cyclic_normal_generators: generator not rewritable");
    keep(g.multiply(g.inverse(s), evaluate_slp(g, lifts, *w)));
  }
  if (out.empty()) out.push_back(g.identity());
  return out;
}

std::optional<std::vector<Element>> normal_sylow(const SolvableData& data, u64 p, std::size_t level,
                                                 std::size_t bound) {
  if (level >= data.length()) return std::vector<Element>{};
  auto lower = normal_sylow(data, p, level + 1, bound);
  if (!lower) return std::nullopt;

  const GroupHandle& top = data.series.front();
  const GroupHandle& here = data.series[level];
  const FactoredInteger& n = data.order;
  const u64 k = n.without_prime(p).value();
  const u64 full = n.prime_power_part(p);

  std::vector<Element> gens = *lower;
  const auto& basis = data.layers[level].basis();
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const FactoredInteger& dj = basis.orders[j];
    if (dj.valuation(p) == 0) continue;
    Element x = here.power(basis.elements[j], dj.without_prime(p).value());
    gens.push_back(here.power(x, k));
  }
  std::vector<Element> nontrivial;
  for (const auto& e : gens)
    if (!top.is_identity(e)) nontrivial.push_back(e);
  if (nontrivial.empty()) return nontrivial;

  ElementIndex span(top);
  try {
    span = enumerate_span(top, nontrivial, std::min<u64>(bound, full));
  } catch (const EnumerationBoundExceeded&) {
    return std::nullopt;
  }
  u64 size = span.size();
  while (size % p == 0) size /= p;
  if (size != 1) return std::nullopt;
  for (const auto& y : here.generators())
    for (const auto& h : nontrivial)
      if (!span.find(top.conjugate(h, y))) return std::nullopt;
  return nontrivial;
}

std::string to_string(RefusalReason r) {
  switch (r) {
    case RefusalReason::non_solvable: return "non-solvable";
    case RefusalReason::non_cyclic_sylow: return "non-cyclic Sylow subgroup";
    case RefusalReason::non_cyclic_kernel: return "non-cyclic normal Hall subgroup";
    case RefusalReason::non_cyclic_top: return "non-cyclic quotient G/K";
    case RefusalReason::order_mismatch: return "order mismatch";
    case RefusalReason::las_vegas_exhausted: return "Las Vegas budget exhausted";
  }
  return "unknown";
}

namespace {

NotMetacyclic refuse(RefusalReason r, std::string detail) { return NotMetacyclic{r, std::move(detail)}; }

Recognition recognize_impl(const GroupHandle& g, const FactoredInteger& n, double threshold, Rng& rng,
                           const LasVegasBudget& budget) {
  const SplitOrder split = split_by_prime_bound(n, threshold);
  const FactoredInteger& a = split.small;
  const FactoredInteger& b = split.big;

  // B and the recognised quotient G/B
  GroupHandle q = quotient(g, hall_membership(g, b));
  auto data = solvable_data(q, a);
  if (!data) return refuse(RefusalReason::non_solvable, "derived series of G/B does not reach 1");

  GroupHandle bgroup = g.subgroup(cyclic_normal_generators(g, data->presentation), b);
  if (!generators_commute(bgroup)) return refuse(RefusalReason::non_cyclic_kernel, "B is not abelian");
  if (!b.is_square_free()) {
    auto bb = abel_recog_2(bgroup, b);
    if (bb.basis().size() > 1) return refuse(RefusalReason::non_cyclic_kernel, "B is not cyclic");
  }
  Element yb = g.identity();
  try {
    yb = cyclic_generator_random(bgroup, b, rng, budget);
  } catch (const LasVegasExhausted& e) {
    return refuse(RefusalReason::las_vegas_exhausted, e.what());
  }

  // normal cyclic Sylow subgroups for the small primes
  FactoredInteger d = b;
  Element k = yb;
  std::vector<std::pair<u64, Element>> sylow;
  for (const auto& pp : a.factors()) {
    const u64 p = pp.prime;
    auto pgens = normal_sylow(*data, p);
    if (!pgens) continue;
    const FactoredInteger pe = a.prime_power(p);
    GroupHandle pgroup = q.subgroup(*pgens, pe);
    if (!generators_commute(pgroup))
      return refuse(RefusalReason::non_cyclic_sylow, "Sylow " + std::to_string(p) + "-subgroup is not abelian");
    auto iso = abel_recog_2(pgroup, pe);
    if (iso.basis().size() > 1)
      return refuse(RefusalReason::non_cyclic_sylow, "Sylow " + std::to_string(p) + "-subgroup is not cyclic");
    if (iso.basis().size() == 0 || !(iso.basis().orders[0] == pe))
      return refuse(RefusalReason::order_mismatch, "Sylow " + std::to_string(p) + "-subgroup has the wrong order");
    Element xp = g.power(iso.basis().elements[0], n.divide(pe).value());
    // Normal in G/B is not enough: the Sylow subgroup of G is normal only
    // when it also centralises B.
    if (!g.equal(g.multiply(xp, yb), g.multiply(yb, xp))) continue;
    for (const auto& [_, other] : sylow)
      if (!g.equal(g.multiply(xp, other), g.multiply(other, xp)))
        return refuse(RefusalReason::non_cyclic_kernel, "normal Sylow subgroups do not commute");
    sylow.push_back({p, xp});
    d = d * pe;
    k = g.multiply(k, xp);
  }

  // G/K and the complement
  const FactoredInteger c = n.divide(d);
  GroupHandle top = quotient(g, hall_membership(g, d));
  if (!generators_commute(top)) return refuse(RefusalReason::non_cyclic_top, "G/K is not abelian");
  auto top_iso = abel_recog_2(top, c);
  if (top_iso.basis().size() > 1) return refuse(RefusalReason::non_cyclic_top, "G/K is not cyclic");
  const FactoredInteger top_order = top_iso.basis().span_order();
  if (!(top_order == c)) return refuse(RefusalReason::order_mismatch, "|G/K| = " + top_order.to_string());
  Element u = top_iso.basis().size() ? g.power(top_iso.basis().elements[0], d.value()) : g.identity();
  GroupHandle ugroup = g.subgroup({u}, c);
  auto alpha = abel_recog_2(ugroup, c);
  if (!(alpha.basis().span_order() == c)) return refuse(RefusalReason::order_mismatch, "|U| differs from c");
  if (!(element_order(g, k, d) == d)) return refuse(RefusalReason::order_mismatch, "|K| differs from d");

  u64 v = deconjugate(g, u, k, c, d, rng, budget);
  if (!g.equal(g.conjugate(k, u), g.power(k, v)))
    return refuse(RefusalReason::order_mismatch, "u does not normalise <k>");

  // every generator of G lies in UK
  Basis kb{{k}, {d}, {}};
  const u64 dinv = c.is_one() ? 0 : *inverse_mod(d.value() % c.value(), c.value());
  for (const auto& s : g.generators()) {
    u64 i = 0;
    if (top_iso.basis().size()) {
      auto t = top_iso.inverse(s);
      if (!t) return refuse(RefusalReason::order_mismatch, "generator outside G/K");
      i = mul_mod((*t)[0], dinv, c.value());
    }
    Element r = g.multiply(s, g.inverse(g.power(u, i)));
    if (!edl(g, kb, d, r)) return refuse(RefusalReason::order_mismatch, "generator outside U K");
  }

  return MetacyclicDecomposition{c, d, u, k, yb, sylow, OneWayIso(g, {d.value()}, {k}), alpha, v};
}

}  // namespace

Recognition recognize_coprime_metacyclic(const GroupHandle& g, const FactoredInteger& n,
                                         std::optional<double> threshold, Rng& rng,
                                         const LasVegasBudget& budget) {
  double c = threshold ? *threshold : default_threshold(n.value());
  try {
    return recognize_impl(g, n, c, rng, budget);
  } catch (const NonAbelianInput& e) {
    return refuse(RefusalReason::non_cyclic_top, e.what());
  } catch (const PreconditionViolation& e) {
    return refuse(RefusalReason::order_mismatch, e.what());
  } catch (const LasVegasExhausted& e) {
    return refuse(RefusalReason::las_vegas_exhausted, e.what());
  }
}

u64 deconjugate_prime_powers(const GroupHandle& g, const Element& x, const Element& y, PrimePower a,
                             PrimePower b, Rng& rng, const LasVegasBudget& budget,
                             std::vector<DeconjugateStep>* trace) {
  const u64 p = a.prime, bv = b.value();
  const u64 phi = checked_pow(b.prime, b.exponent - 1) * (b.prime - 1);
  unsigned gexp = 0;
  for (u64 t = phi; t % p == 0; t /= p) ++gexp;
  auto record = [&](u64 unit, u64 v) {
    if (trace) trace->push_back({a.value(), bv, unit, v});
    return v;
  };
  if (gexp == 0) return record(1, 1 % bv);

  // unit of order p^g
  const u64 pg = checked_pow(p, gexp);
  u64 k = 0;
  const unsigned tries = budget.tries(bv);
  for (unsigned i = 0; i < tries && !k; ++i) {
    u64 r = 1 + rng.below(bv - 1);
    if (std::gcd(r, bv) != 1) continue;
    u64 cand = pow_mod(r, phi / pg, bv);
    if (pow_mod(cand, pg / p, bv) != 1) k = cand;
  }
  if (!k) throw LasVegasExhausted("deconjugate: no unit of order " + std::to_string(pg) + " mod " + std::to_string(bv));
  const unsigned h = std::min(a.exponent, gexp);
  k = pow_mod(k, checked_pow(p, gexp - h), bv);
  const u64 ph = checked_pow(p, h);

  // digits of m with x acting as k^m
  u64 m = 0, pi = 1;
  for (unsigned i = 0; i < h; ++i, pi *= p) {
    const u64 big_p = checked_pow(p, h - 1 - i);
    const Element target = g.conjugate(y, g.power(x, big_p));
    bool found = false;
    for (u64 digit = 0; digit < p; ++digit) {
      u64 cand = m + digit * pi;
      u64 e = pow_mod(k, (big_p * cand) % ph, bv);
      if (g.equal(g.power(y, e), target)) {
        m = cand;
        found = true;
        break;
      }
    }
    if (!found) throw PreconditionViolation("deconjugate: no digit matches; y^x is not in <y>");
  }
  return record(k, pow_mod(k, m, bv));
}

namespace {

// Largest prime power of n and the cofactor.
std::pair<FactoredInteger, FactoredInteger> split_largest(const FactoredInteger& n) {
  const PrimePower* best = nullptr;
  for (const auto& pp : n.factors())
    if (!best || pp.value() > best->value()) best = &pp;
  FactoredInteger u = n.prime_power(best->prime);
  return {u, n.divide(u)};
}

u64 signed_power(u64 base, i64 e, u64 m) {
  if (e >= 0) return pow_mod(base, static_cast<u64>(e), m);
  auto inv = inverse_mod(base, m);
  if (!inv) throw PreconditionViolation("deconjugate: partial result is not a unit");
  return pow_mod(*inv, static_cast<u64>(-e), m);
}

}  // namespace

u64 deconjugate(const GroupHandle& g, const Element& x, const Element& y, const FactoredInteger& a,
                const FactoredInteger& b, Rng& rng, const LasVegasBudget& budget,
                std::vector<DeconjugateStep>* trace) {
  if (b.is_one()) return 0;
  if (a.is_one()) return 1 % b.value();
  if (!gcd(a, b).is_one()) throw std::invalid_argument("deconjugate: a and b must be coprime");
  const u64 bv = b.value();
  if (a.factors().size() > 1) {
    auto [u, v] = split_largest(a);
    Bezout z = extended_gcd(static_cast<i64>(u.value()), static_cast<i64>(v.value()));
    u64 mu = deconjugate(g, g.power(x, u.value()), y, v, b, rng, budget, trace);
    u64 mv = deconjugate(g, g.power(x, v.value()), y, u, b, rng, budget, trace);
    return mul_mod(signed_power(mu, z.s, bv), signed_power(mv, z.t, bv), bv);
  }
  if (b.factors().size() > 1) {
    auto [u, v] = split_largest(b);
    const u64 uv = u.value(), vv = v.value();
    Bezout z = extended_gcd(static_cast<i64>(uv), static_cast<i64>(vv));
    // y^u has order v and determines the result mod v; y^v gives it mod u.
    u64 mod_v = deconjugate(g, x, g.power(y, uv), a, v, rng, budget, trace);
    u64 mod_u = deconjugate(g, x, g.power(y, vv), a, u, rng, budget, trace);
    u64 us = mul_mod(uv % bv, reduce_signed(z.s, bv), bv);
    u64 vt = mul_mod(vv % bv, reduce_signed(z.t, bv), bv);
    return (mul_mod(mod_v, us, bv) + mul_mod(mod_u, vt, bv)) % bv;
  }
  return deconjugate_prime_powers(g, x, y, a.factors()[0], b.factors()[0], rng, budget, trace);
}

NotCoprimeMetacyclic::NotCoprimeMetacyclic(int which, NotMetacyclic why)
    : std::runtime_error("input " + std::to_string(which + 1) + " is not coprime meta-cyclic: " +
                         to_string(why.reason) + (why.detail.empty() ? "" : " (" + why.detail + ")")),
      which(which),
      why(std::move(why)) {}

bool same_action_image(const MetacyclicDecomposition& x, const MetacyclicDecomposition& y) {
  if (!(x.c == y.c) || !(x.d == y.d)) return false;
  if (x.d.value() == 1 || x.c.is_one()) return true;
  auto units = std::make_shared<UnitsBackend>(x.d.value());
  GroupHandle v(units, {units->make(x.action_v)}, x.c);
  auto iso = abel_recog_2(v, x.c);
  Element vt = units->make(y.action_v);
  if (!membership_from_iso(iso)(vt)) return false;
  return iso.basis().span_order() == element_order(v, vt, x.c);
}

bool iso_metacyclic(const GroupHandle& g, const GroupHandle& h, const FactoredInteger& n,
                    std::optional<double> threshold, Rng& rng, const LasVegasBudget& budget) {
  Recognition r[2] = {recognize_coprime_metacyclic(g, n, threshold, rng, budget),
                      recognize_coprime_metacyclic(h, n, threshold, rng, budget)};
  for (int i = 0; i < 2; ++i)
    if (auto* no = std::get_if<NotMetacyclic>(&r[i])) throw NotCoprimeMetacyclic(i, *no);
  return same_action_image(std::get<MetacyclicDecomposition>(r[0]), std::get<MetacyclicDecomposition>(r[1]));
}

std::optional<std::pair<u64, u64>> standard_iso_witness(const FactoredInteger& a, const FactoredInteger& b,
                                                        u64 ell, u64 ell_tilde) {
  const u64 bv = b.value(), av = a.value();
  if (bv == 1) return std::pair<u64, u64>{1 % av, 0};
  ell %= bv;
  ell_tilde %= bv;
  if (std::gcd(ell, bv) != 1 || std::gcd(ell_tilde, bv) != 1) return std::nullopt;
  const u64 l = multiplicative_order(ell, bv);
  if (multiplicative_order(ell_tilde, bv) != l) return std::nullopt;
  std::optional<u64> u;
  u64 pw = 1 % bv;
  for (u64 i = 0; i < l; ++i, pw = mul_mod(pw, ell_tilde, bv))
    if (pw == ell) {
      u = i;
      break;
    }
  if (!u) return std::nullopt;
  if (av % l != 0) return std::nullopt;
  u64 x = 1;
  for (u64 p : factorize(av / l).primes())
    if (*u % p != 0) x *= p;
  const u64 m = *u + x * l;
  return std::pair<u64, u64>{m % av, 1 % bv};
}

}  // namespace bbiso
