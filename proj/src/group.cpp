#include "bbiso/group.hpp"

#include <stdexcept>
#include <unordered_map>

namespace bbiso {

GroupHandle::GroupHandle(std::shared_ptr<const Backend> backend, std::vector<Element> generators,
                         std::optional<FactoredInteger> known_order)
    : backend_(std::move(backend)), generators_(std::move(generators)), known_order_(std::move(known_order)) {
  if (!backend_) throw std::invalid_argument("GroupHandle: null backend");
  if (generators_.empty()) generators_.push_back(backend_->identity());
}

Element GroupHandle::power(const Element& g, u64 k) const {
  Element result = identity();
  Element base = g;
  while (k > 0) {
    if (k & 1) result = multiply(result, base);
    k >>= 1;
    if (k) base = multiply(base, base);
  }
  return result;
}

Element GroupHandle::power_signed(const Element& g, i64 k) const {
  if (k >= 0) return power(g, static_cast<u64>(k));
  // -k overflows for INT64_MIN; go through unsigned negation
  return power(inverse(g), ~static_cast<u64>(k) + 1);
}

Element GroupHandle::conjugate(const Element& g, const Element& h) const {
  return multiply(multiply(inverse(h), g), h);
}

Element GroupHandle::commutator(const Element& g, const Element& h) const {
  return multiply(multiply(inverse(g), inverse(h)), multiply(g, h));
}

std::optional<bool> GroupHandle::try_equal(const Element& a, const Element& b) const {
  if (!congruence_) return a == b;
  if (a == b) return true;
  return congruence_->membership(multiply(inverse(a), b));
}

bool GroupHandle::equal(const Element& a, const Element& b) const {
  auto r = try_equal(a, b);
  if (!r) throw UndefinedOperation("congruence predicate undefined on a required input");
  return *r;
}

bool GroupHandle::is_identity(const Element& a) const { return equal(a, identity()); }

GroupHandle GroupHandle::subgroup(std::vector<Element> generators,
                                  std::optional<FactoredInteger> known_order) const {
  GroupHandle h(backend_, std::move(generators), std::move(known_order));
  h.congruence_ = congruence_;
  return h;
}

GroupHandle GroupHandle::with_known_order(std::optional<FactoredInteger> n) const {
  GroupHandle h = *this;
  h.known_order_ = std::move(n);
  return h;
}

GroupHandle GroupHandle::with_congruence(Congruence c) const {
  GroupHandle h = *this;
  h.congruence_ = std::move(c);
  return h;
}

GroupHandle quotient(const GroupHandle& g, Congruence n) { return g.with_congruence(std::move(n)); }

Element evaluate_slp(const GroupHandle& g, const Slp& s) { return evaluate_slp(g, g.generators(), s); }

Element evaluate_slp(const GroupHandle& g, const std::vector<Element>& images, const Slp& s) {
  if (auto m = s.max_index(); m && *m >= images.size())
    throw std::out_of_range("SLP generator index out of range");
  // Iterative post-order walk; SLPs built by long random walks are deep.
  std::unordered_map<const Slp::Node*, Element> memo;
  std::vector<std::pair<const Slp::Node*, bool>> stack{{s.node(), false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(n)) continue;
    if (!expanded) {
      stack.push_back({n, true});
      if (n->right && !memo.count(n->right.get())) stack.push_back({n->right.get(), false});
      if (n->left && !memo.count(n->left.get())) stack.push_back({n->left.get(), false});
      continue;
    }
    Element v;
    switch (n->op) {
      case Slp::Op::identity:
        v = g.identity();
        break;
      case Slp::Op::generator:
        v = images[n->index];
        break;
      case Slp::Op::product:
        v = g.multiply(memo.at(n->left.get()), memo.at(n->right.get()));
        break;
      case Slp::Op::inverse:
        v = g.inverse(memo.at(n->left.get()));
        break;
      case Slp::Op::power:
        v = g.power_signed(memo.at(n->left.get()), n->exponent);
        break;
    }
    memo.emplace(n, std::move(v));
  }
  return memo.at(s.node());
}

FactoredInteger element_order(const GroupHandle& g, const Element& x, const FactoredInteger& multiple) {
  if (!g.is_identity(g.power(x, multiple.value())))
    throw PreconditionViolation("element order does not divide the declared order");
  u64 ord = multiple.value();
  for (const auto& pp : multiple.factors()) {
    for (unsigned i = 0; i < pp.exponent; ++i) {
      if (g.is_identity(g.power(x, ord / pp.prime)))
        ord /= pp.prime;
      else
        break;
    }
  }
  return multiple.factor_divisor(ord);
}

FactoredInteger element_order(const GroupHandle& g, const Element& x) {
  if (!g.known_order()) throw std::invalid_argument("element_order: group has no known order");
  return element_order(g, x, *g.known_order());
}

ProductReplacer::ProductReplacer(const GroupHandle& g, Rng& rng, unsigned burn_in)
    : group_(g), rng_(rng), acc_(g.identity()), acc_word_(Slp::identity()) {
  const auto& gens = g.generators();
  std::size_t n = std::max<std::size_t>(10, gens.size());
  for (std::size_t i = 0; i < n; ++i) {
    slots_.push_back(gens[i % gens.size()]);
    words_.push_back(Slp::generator(i % gens.size()));
  }
  for (unsigned i = 0; i < burn_in; ++i) step();
}

void ProductReplacer::step() {
  std::size_t n = slots_.size();
  std::size_t i = rng_.below(n);
  std::size_t j = rng_.below(n - 1);
  if (j >= i) ++j;
  bool invert = rng_.below(2) == 1;
  bool on_left = rng_.below(2) == 1;
  Element other = invert ? group_.inverse(slots_[j]) : slots_[j];
  Slp other_word = invert ? Slp::inverse(words_[j]) : words_[j];
  if (on_left) {
    slots_[i] = group_.multiply(other, slots_[i]);
    words_[i] = Slp::product(other_word, words_[i]);
  } else {
    slots_[i] = group_.multiply(slots_[i], other);
    words_[i] = Slp::product(words_[i], other_word);
  }
  // rattle accumulator
  acc_ = group_.multiply(acc_, slots_[i]);
  acc_word_ = Slp::product(acc_word_, words_[i]);
}

std::pair<Element, Slp> ProductReplacer::next() {
  step();
  return {acc_, acc_word_};
}

std::pair<Element, Slp> random_element(const GroupHandle& g, Rng& rng) {
  ProductReplacer pr(g, rng);
  return pr.next();
}

std::optional<std::size_t> ElementIndex::find(const Element& x) const {
  if (group_.hashable()) {
    auto it = map_.find(x);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (group_.equal(elements_[i], x)) return i;
  return std::nullopt;
}

std::pair<std::size_t, bool> ElementIndex::insert(const Element& x) {
  if (auto i = find(x)) return {*i, false};
  elements_.push_back(x);
  if (group_.hashable()) map_.emplace(x, elements_.size() - 1);
  return {elements_.size() - 1, true};
}

ElementIndex enumerate_span(const GroupHandle& g, const std::vector<Element>& gens, std::size_t bound) {
  ElementIndex idx(g);
  idx.insert(g.identity());
  for (std::size_t head = 0; head < idx.size(); ++head) {
    for (const auto& s : gens) {
      Element y = g.multiply(idx[head], s);
      if (idx.insert(y).second && idx.size() > bound)
        throw EnumerationBoundExceeded("span exceeds enumeration bound " + std::to_string(bound));
    }
  }
  return idx;
}

std::vector<Element> normal_closure(const GroupHandle& g, const std::vector<Element>& seeds,
                                    std::size_t bound) {
  std::vector<Element> gens;
  for (const auto& s : seeds)
    if (!g.is_identity(s)) gens.push_back(s);
  if (gens.empty()) return {g.identity()};
  ElementIndex span = enumerate_span(g, gens, bound);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (const auto& h : g.generators()) {
      Element c = g.conjugate(gens[i], h);
      if (span.find(c)) continue;
      gens.push_back(c);
      span = enumerate_span(g, gens, bound);
    }
  }
  return gens;
}

GroupHandle derived_subgroup(const GroupHandle& g, std::size_t bound) {
  const auto& s = g.generators();
  std::vector<Element> comms;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) comms.push_back(g.commutator(s[i], s[j]));
  return g.subgroup(normal_closure(g, comms, bound), g.known_order());
}

bool generators_commute(const GroupHandle& g) {
  const auto& s = g.generators();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!g.equal(g.multiply(s[i], s[j]), g.multiply(s[j], s[i]))) return false;
  return true;
}

}  // namespace bbiso
