#include "bbiso/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "bbiso/order_analysis.hpp"

namespace bbiso {

FactoredInteger Basis::span_order() const {
  FactoredInteger n;
  for (const auto& o : orders) n = n * o;
  return n;
}

std::vector<u64> CanonicalBasis::invariants() const {
  std::vector<u64> out;
  for (const auto& o : orders) out.push_back(o.value());
  return out;
}

// ---- p-group EDL ----

struct PGroupEdl::Table {
  std::vector<Element> values;  // indexed by mixed-radix code of the a-vector
  std::unordered_map<Element, u64, ElementHash> lookup;
};

namespace {

u64 ceil_sqrt(u64 p) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(p)));
  while (r * r < p) ++r;
  while (r > 1 && (r - 1) * (r - 1) >= p) --r;
  return r;
}

}  // namespace

PGroupEdl::PGroupEdl(const GroupHandle& g, const Basis& basis) : group_(g), elements_(basis.elements) {
  if (basis.orders.size() != basis.elements.size())
    throw std::invalid_argument("edl: basis orders and elements differ in length");
  for (const auto& o : basis.orders) {
    if (o.is_one()) {
      exps_.push_back(0);
      continue;
    }
    if (!o.is_prime_power()) throw std::invalid_argument("edl_p_group: basis is not a p-group basis");
    u64 q = o.factors()[0].prime;
    if (p_ != 0 && q != p_) throw std::invalid_argument("edl_p_group: basis mixes primes");
    p_ = q;
    exps_.push_back(o.factors()[0].exponent);
  }
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > 0) order_.push_back(i);
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return exps_[a] > exps_[b]; });
  if (p_ == 0) return;
  step_ = ceil_sqrt(p_);
  max_exp_ = exps_[order_.front()];
  for (std::size_t i : order_) {
    roots_.push_back(g.power(elements_[i], checked_pow(p_, exps_[i] - 1)));
    giant_.push_back(g.inverse(g.power(roots_.back(), step_)));
  }
}

const PGroupEdl::Table& PGroupEdl::table(std::size_t active) const {
  auto it = tables_.find(active);
  if (it != tables_.end()) return *it->second;
  auto t = std::make_shared<Table>();
  t->values.push_back(group_.identity());
  // code = sum a_i * step^i
  for (std::size_t i = 0; i < active; ++i) {
    std::size_t prev = t->values.size();
    Element pw = group_.identity();
    std::vector<Element> next;
    next.reserve(prev * step_);
    for (u64 a = 0; a < step_; ++a) {
      for (std::size_t k = 0; k < prev; ++k) next.push_back(group_.multiply(t->values[k], pw));
      pw = group_.multiply(pw, roots_[i]);
    }
    t->values = std::move(next);
  }
  if (group_.hashable())
    for (u64 code = 0; code < t->values.size(); ++code) t->lookup.emplace(t->values[code], code);
  return *tables_.emplace(active, std::move(t)).first->second;
}

std::optional<std::vector<u64>> PGroupEdl::solve_digits(std::size_t active, const Element& target) const {
  const Table& t = table(active);
  auto find = [&](const Element& x) -> std::optional<u64> {
    if (group_.hashable()) {
      auto it = t.lookup.find(x);
      if (it == t.lookup.end()) return std::nullopt;
      return it->second;
    }
    for (u64 code = 0; code < t.values.size(); ++code)
      if (group_.equal(t.values[code], x)) return code;
    return std::nullopt;
  };
  auto decode = [&](u64 code) {
    std::vector<u64> v(active);
    for (std::size_t i = 0; i < active; ++i) {
      v[i] = code % step_;
      code /= step_;
    }
    return v;
  };
  // Giant steps: target * prod giant_i^(b_i), b in [0, step)^active.
  std::vector<u64> b(active, 0);
  std::vector<Element> partial(active + 1, target);
  for (;;) {
    const Element& cur = partial[0];
    if (auto code = find(cur)) {
      auto a = decode(*code);
      std::vector<u64> c(active);
      for (std::size_t i = 0; i < active; ++i) c[i] = (a[i] + step_ * b[i]) % p_;
      return c;
    }
    // advance the mixed-radix counter b; partial[i] = target * prod_{j>=i} giant_j^b_j
    std::size_t i = 0;
    while (i < active && b[i] + 1 == step_) ++i;
    if (i == active) return std::nullopt;
    ++b[i];
    partial[i] = group_.multiply(partial[i], giant_[i]);
    for (std::size_t j = i; j-- > 0;) {
      b[j] = 0;
      partial[j] = partial[j + 1];
    }
  }
}

std::optional<Exponents> PGroupEdl::solve(const Element& target) const {
  Exponents f(elements_.size(), 0);
  if (p_ == 0) {
    if (group_.is_identity(target)) return f;
    return std::nullopt;
  }
  for (unsigned m = 0; m < max_exp_; ++m) {
    Element cur = target;
    for (std::size_t i : order_)
      if (f[i]) cur = group_.multiply(cur, group_.inverse(group_.power(elements_[i], f[i])));
    cur = group_.power(cur, checked_pow(p_, max_exp_ - 1 - m));
    std::size_t active = 0;
    while (active < order_.size() && exps_[order_[active]] >= max_exp_ - m) ++active;
    auto c = solve_digits(active, cur);
    if (!c) return std::nullopt;
    for (std::size_t k = 0; k < active; ++k) {
      std::size_t i = order_[k];
      unsigned digit = exps_[i] - max_exp_ + m;
      f[i] += (*c)[k] * checked_pow(p_, digit);
    }
  }
  Element check = group_.identity();
  for (std::size_t i : order_) check = group_.multiply(check, group_.power(elements_[i], f[i]));
  if (!group_.equal(check, target)) return std::nullopt;
  return f;
}

std::optional<Exponents> edl_p_group(const GroupHandle& g, const Basis& basis, const Element& target) {
  return PGroupEdl(g, basis).solve(target);
}

// ---- multi-prime EDL ----

EdlSolver::EdlSolver(const GroupHandle& g, const Basis& basis, const FactoredInteger& span_order)
    : group_(g), basis_(basis), span_order_(span_order) {
  for (const auto& o : basis_.orders)
    if (!o.divides(span_order_)) throw std::invalid_argument("edl: basis order does not divide the span order");
  for (const auto& pp : span_order_.factors()) {
    PrimePart part;
    part.p = pp.prime;
    part.cofactor = span_order_.without_prime(pp.prime).value();
    Basis sub;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      FactoredInteger local = basis_.orders[i].prime_power(pp.prime);
      part.moduli.push_back(local.value());
      if (local.is_one()) continue;
      part.active.push_back(i);
      sub.elements.push_back(g.power(basis_.elements[i], part.cofactor));
      sub.orders.push_back(local);
    }
    part.solver = std::make_unique<PGroupEdl>(g, sub);
    parts_.push_back(std::move(part));
  }
}

std::optional<Exponents> EdlSolver::solve(const Element& target) const {
  const std::size_t s = basis_.size();
  // CRT accumulators: f_i mod m_i
  std::vector<u64> f(s, 0), mod(s, 1);
  for (const auto& part : parts_) {
    auto sol = part.solver->solve(group_.power(target, part.cofactor));
    if (!sol) return std::nullopt;
    for (std::size_t k = 0; k < part.active.size(); ++k) {
      std::size_t i = part.active[k];
      u64 r = (*sol)[k] % part.moduli[i];
      u64 m1 = mod[i], m2 = part.moduli[i];
      // x = f + m1 * ((r - f) * m1^-1 mod m2)
      u64 inv = *inverse_mod(m1 % m2, m2);
      u64 diff = (r + m2 - f[i] % m2) % m2;
      u64 t = mul_mod(diff, inv, m2);
      f[i] = f[i] + m1 * t;
      mod[i] = m1 * m2;
    }
  }
  Element check = group_.identity();
  for (std::size_t i = 0; i < s; ++i) check = group_.multiply(check, group_.power(basis_.elements[i], f[i]));
  if (!group_.equal(check, target)) return std::nullopt;
  return f;
}

std::optional<Exponents> edl(const GroupHandle& g, const Basis& basis, const FactoredInteger& span_order,
                             const Element& target) {
  return EdlSolver(g, basis, span_order).solve(target);
}

// ---- canonical basis ----

namespace {

struct Tracked {
  Element element;
  unsigned exponent;  // order p^exponent
  Slp word;
};

Basis as_basis(const std::vector<Tracked>& b, u64 p) {
  Basis out;
  for (const auto& t : b) {
    out.elements.push_back(t.element);
    out.orders.push_back(FactoredInteger::from_factors({{p, t.exponent}}));
    out.words.push_back(t.word);
  }
  return out;
}

u64 valuation(u64 x, u64 p) {
  u64 v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Smith normal form of the relation matrix over Z/p^v for generators gens,
// returning the new independent generators of nontrivial order.
std::vector<Tracked> snf_repair(const GroupHandle& g, const std::vector<Tracked>& gens,
                                const std::vector<std::vector<u64>>& rel, u64 p, unsigned v) {
  const std::size_t n = gens.size();
  const u64 M = checked_pow(p, v);
  auto R = rel;
  std::vector<std::vector<u64>> W(n, std::vector<u64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) W[i][i] = 1 % M;
  std::vector<unsigned> diag(n, v);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pr = n, pc = n;
    u64 best = v;
    for (std::size_t r = t; r < n; ++r)
      for (std::size_t c = t; c < n; ++c)
        if (R[r][c] != 0) {
          u64 w = valuation(R[r][c], p);
          if (w < best) {
            best = w;
            pr = r;
            pc = c;
          }
        }
    if (pr == n) break;
    std::swap(R[pr], R[t]);
    if (pc != t) {
      for (std::size_t r = 0; r < n; ++r) std::swap(R[r][pc], R[r][t]);
      std::swap(W[pc], W[t]);
    }
    u64 pw = checked_pow(p, static_cast<unsigned>(best));
    u64 uinv = *inverse_mod((R[t][t] / pw) % M, M);
    for (std::size_t r = t + 1; r < n; ++r) {
      if (R[r][t] == 0) continue;
      u64 factor = mul_mod(R[r][t] / pw, uinv, M);
      for (std::size_t c = t; c < n; ++c) R[r][c] = (R[r][c] + M - mul_mod(factor, R[t][c], M)) % M;
    }
    for (std::size_t c = t + 1; c < n; ++c) {
      if (R[t][c] == 0) continue;
      u64 factor = mul_mod(R[t][c] / pw, uinv, M);
      for (std::size_t r = t; r < n; ++r) R[r][c] = (R[r][c] + M - mul_mod(factor, R[r][t], M)) % M;
      for (std::size_t k = 0; k < n; ++k) W[t][k] = (W[t][k] + mul_mod(factor, W[c][k], M)) % M;
    }
    diag[t] = static_cast<unsigned>(best);
  }
  std::vector<Tracked> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (diag[j] == 0) continue;
    Element e = g.identity();
    std::vector<Slp> parts;
    for (std::size_t i = 0; i < n; ++i) {
      if (W[j][i] == 0) continue;
      e = g.multiply(e, g.power(gens[i].element, W[j][i]));
      parts.push_back(Slp::power(gens[i].word, static_cast<i64>(W[j][i])));
    }
    out.push_back({e, diag[j], Slp::product_of(parts)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Tracked& a, const Tracked& b) { return a.exponent > b.exponent; });
  return out;
}

std::vector<Tracked> p_basis(const GroupHandle& g, const FactoredInteger& n, u64 p) {
  const unsigned v = n.valuation(p);
  const u64 cof = n.without_prime(p).value();
  std::vector<Tracked> basis;
  std::vector<std::pair<Element, Slp>> projected;
  for (std::size_t i = 0; i < g.generators().size(); ++i)
    projected.push_back({g.power(g.generators()[i], cof), Slp::power(Slp::generator(i), static_cast<i64>(cof))});
  for (const auto& [h, hw] : projected) {
    if (g.is_identity(h)) continue;
    PGroupEdl solver(g, as_basis(basis, p));
    Element cur = h;
    unsigned k = 0;
    std::optional<Exponents> rel;
    for (;;) {
      rel = solver.solve(cur);
      if (rel) break;
      if (++k > v) throw PreconditionViolation("element order exceeds the declared order");
      cur = g.power(cur, p);
    }
    if (k == 0) continue;
    const std::size_t s = basis.size();
    const u64 M = checked_pow(p, v);
    std::vector<std::vector<u64>> R(s + 1, std::vector<u64>(s + 1, 0));
    for (std::size_t i = 0; i < s; ++i) R[i][i] = checked_pow(p, basis[i].exponent) % M;
    for (std::size_t i = 0; i < s; ++i) R[s][i] = ((*rel)[i] % M == 0) ? 0 : M - (*rel)[i] % M;
    R[s][s] = checked_pow(p, k) % M;
    auto gens = basis;
    gens.push_back({h, 0, hw});
    basis = snf_repair(g, gens, R, p, v);
  }
  // Every projected generator must now lie in the span.
  PGroupEdl final_solver(g, as_basis(basis, p));
  for (const auto& [h, hw] : projected)
    if (!final_solver.solve(h)) throw NonAbelianInput("sifting produced an inconsistent basis; group is not abelian");
  return basis;
}

}  // namespace

CanonicalBasis canonical_basis(const GroupHandle& g, const FactoredInteger& n) {
  if (!generators_commute(g)) throw NonAbelianInput("generators do not commute");
  std::vector<std::vector<Tracked>> per_prime;
  std::vector<u64> primes;
  for (const auto& pp : n.factors()) {
    auto b = p_basis(g, n, pp.prime);
    if (b.empty()) continue;
    per_prime.push_back(std::move(b));
    primes.push_back(pp.prime);
  }
  std::size_t rank = 0;
  for (const auto& b : per_prime) rank = std::max(rank, b.size());
  CanonicalBasis out;
  // Largest with largest; position t collects the t-th largest of each prime.
  for (std::size_t t = 0; t < rank; ++t) {
    Element e = g.identity();
    FactoredInteger ord;
    std::vector<Slp> words;
    for (std::size_t k = 0; k < per_prime.size(); ++k) {
      if (t >= per_prime[k].size()) continue;
      const auto& x = per_prime[k][t];
      e = g.multiply(e, x.element);
      ord = ord * FactoredInteger::from_factors({{primes[k], x.exponent}});
      words.push_back(x.word);
    }
    out.elements.push_back(e);
    out.orders.push_back(ord);
    out.words.push_back(Slp::product_of(words));
  }
  std::reverse(out.elements.begin(), out.elements.end());
  std::reverse(out.orders.begin(), out.orders.end());
  std::reverse(out.words.begin(), out.words.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!g.equal(g.multiply(out.elements[i], out.elements[j]), g.multiply(out.elements[j], out.elements[i])))
        throw NonAbelianInput("basis elements do not commute; group is not abelian");
  return out;
}

// ---- isomorphisms ----

OneWayIso::OneWayIso(GroupHandle g, std::vector<u64> moduli, std::vector<Element> images)
    : group_(std::move(g)), moduli_(std::move(moduli)), images_(std::move(images)) {
  if (moduli_.size() != images_.size()) throw std::invalid_argument("OneWayIso: moduli/images length mismatch");
}

std::optional<Element> OneWayIso::forward(const Exponents& t) const {
  if (t.size() != images_.size()) return std::nullopt;
  Element e = group_.identity();
  for (std::size_t i = 0; i < t.size(); ++i) e = group_.multiply(e, group_.power(images_[i], t[i] % moduli_[i]));
  return e;
}

TwoWayIso::TwoWayIso(GroupHandle g, CanonicalBasis basis) : group_(std::move(g)), basis_(std::move(basis)) {
  moduli_ = basis_.invariants();
  solver_ = std::make_shared<EdlSolver>(group_, basis_, basis_.span_order());
}

std::optional<Element> TwoWayIso::forward(const Exponents& t) const {
  return OneWayIso(group_, moduli_, basis_.elements).forward(t);
}

std::optional<Exponents> TwoWayIso::inverse(const Element& x) const {
  auto t = solver_->solve(x);
  if (!t) return std::nullopt;
  for (std::size_t i = 0; i < t->size(); ++i) (*t)[i] %= moduli_[i];
  return t;
}

TwoWayIso abel_recog_2(const GroupHandle& g, const FactoredInteger& n) {
  return TwoWayIso(g, canonical_basis(g, n));
}

bool iso_abelian(const GroupHandle& g, const GroupHandle& h, const FactoredInteger& n, double threshold,
                 bool strict) {
  for (const GroupHandle* x : {&g, &h})
    if (x->known_order() && !(*x->known_order() == n))
      throw std::invalid_argument("iso_abelian: group order differs from n");
  if (strict) {
    if (!generators_commute(g)) throw NonAbelianInput("first group is not abelian");
    if (!generators_commute(h)) throw NonAbelianInput("second group is not abelian");
  }
  auto split = split_by_prime_bound(n, threshold);
  if (!split.big.is_square_free())
    throw PreconditionViolation("iso_abelian: big part of the order is not square-free");
  const u64 b = split.big.value();
  auto small_part = [&](const GroupHandle& x) {
    std::vector<Element> gens;
    for (const auto& s : x.generators()) gens.push_back(x.power(s, b));
    return canonical_basis(x.subgroup(gens, split.small), split.small).invariants();
  };
  return small_part(g) == small_part(h);
}

Element cyclic_generator_random(const GroupHandle& b_group, const FactoredInteger& b, Rng& rng, unsigned max_tries) {
  if (b.is_one()) return b_group.identity();
  ProductReplacer pr(b_group, rng);
  for (unsigned i = 0; i < max_tries; ++i) {
    Element x = pr.next().first;
    if (!b_group.is_identity(b_group.power(x, b.value()))) continue;
    bool full = true;
    for (u64 q : b.primes())
      if (b_group.is_identity(b_group.power(x, b.value() / q))) {
        full = false;
        break;
      }
    if (full) return x;
  }
  throw LasVegasExhausted("no element of order " + std::to_string(b.value()) + " found in " +
                          std::to_string(max_tries) + " tries");
}

Element cyclic_generator_random(const GroupHandle& b_group, const FactoredInteger& b, Rng& rng,
                                const LasVegasBudget& budget) {
  return cyclic_generator_random(b_group, b, rng, budget.tries(b.value()));
}

MembershipTest membership_from_iso(const TwoWayIso& iso) {
  return [iso](const Element& x) -> std::optional<Slp> {
    auto t = iso.inverse(x);
    if (!t) return std::nullopt;
    auto y = iso.forward(*t);
    if (!y || !iso.group().equal(*y, x)) return std::nullopt;
    std::vector<Slp> parts;
    for (std::size_t i = 0; i < t->size(); ++i)
      if ((*t)[i]) parts.push_back(Slp::power(iso.basis().words[i], static_cast<i64>((*t)[i])));
    return Slp::product_of(parts);
  };
}

ConstructivePresentation presentation_from_iso(const TwoWayIso& iso) {
  ConstructivePresentation pres{iso.group(), iso.basis().elements, {}, {}};
  const auto& d = iso.moduli();
  for (std::size_t i = 0; i < d.size(); ++i) pres.relators.push_back(Slp::power(Slp::generator(i), static_cast<i64>(d[i])));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      Slp xi = Slp::generator(i), xj = Slp::generator(j);
      pres.relators.push_back(Slp::product_of({Slp::inverse(xi), Slp::inverse(xj), xi, xj}));
    }
  pres.rewrite = [iso](const Element& x) -> std::optional<Slp> {
    auto t = iso.inverse(x);
    if (!t) return std::nullopt;
    std::vector<Slp> parts;
    for (std::size_t i = 0; i < t->size(); ++i)
      if ((*t)[i]) parts.push_back(Slp::power(Slp::generator(i), static_cast<i64>((*t)[i])));
    return Slp::product_of(parts);
  };
  return pres;
}

}  // namespace bbiso
