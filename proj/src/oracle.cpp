#include "bbiso/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace bbiso {

using Label = CayleyTable::Label;

CayleyTable::CayleyTable(std::vector<Label> table, std::vector<Label> generators)
    : table_(std::move(table)), generators_(std::move(generators)) {
  std::size_t m = 0;
  while (m * m < table_.size()) ++m;
  if (m * m != table_.size() || m == 0) throw std::invalid_argument("CayleyTable: table is not square");
  order_ = m;
  inverse_.assign(m, 0);
  for (Label a = 0; a < m; ++a)
    for (Label b = 0; b < m; ++b)
      if (mul(a, b) == 0) inverse_[a] = b;
  orders_.assign(m, 0);
  for (Label a = 0; a < m; ++a) {
    std::size_t k = 1;
    for (Label x = a; x != 0; x = mul(x, a)) {
      ++k;
      if (k > m) break;  // not a group; is_valid_group reports it
    }
    orders_[a] = a == 0 ? 1 : k;
  }
}

bool CayleyTable::is_commutative() const {
  for (Label a = 0; a < order_; ++a)
    for (Label b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool CayleyTable::is_valid_group() const {
  const std::size_t m = order_;
  for (Label a = 0; a < m; ++a)
    if (mul(0, a) != a || mul(a, 0) != a) return false;
  for (Label a = 0; a < m; ++a) {
    std::vector<bool> row(m, false), col(m, false);
    for (Label b = 0; b < m; ++b) {
      if (row[mul(a, b)] || col[mul(b, a)]) return false;
      row[mul(a, b)] = col[mul(b, a)] = true;
    }
  }
  for (Label a = 0; a < m; ++a)
    for (Label b = 0; b < m; ++b) {
      Label ab = mul(a, b);
      for (Label c = 0; c < m; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
    }
  return true;
}

EnumeratedGroup enumerate_group(const GroupHandle& g, std::size_t bound) {
  ElementIndex idx = enumerate_span(g, g.generators(), bound);
  const std::size_t m = idx.size();
  std::vector<Label> table(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      auto c = idx.find(g.multiply(idx[a], idx[b]));
      if (!c) throw PreconditionViolation("enumeration is not closed under multiplication");
      table[a * m + b] = static_cast<Label>(*c);
    }
  std::vector<Label> gens;
  for (const auto& s : g.generators()) gens.push_back(static_cast<Label>(*idx.find(s)));
  return {CayleyTable(std::move(table), std::move(gens)), idx.elements()};
}

namespace {

// Subgroup generated by labels, as a characteristic vector and size.
std::pair<std::vector<bool>, std::size_t> span_of(const CayleyTable& t, const std::vector<Label>& gens) {
  std::vector<bool> in(t.order(), false);
  std::vector<Label> queue{0};
  in[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Label s : gens) {
      Label y = t.mul(queue[head], s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  return {in, queue.size()};
}

std::map<std::size_t, std::size_t> order_histogram(const CayleyTable& t) {
  std::map<std::size_t, std::size_t> h;
  for (Label a = 0; a < t.order(); ++a) ++h[t.element_order(a)];
  return h;
}

class TupleSearch {
 public:
  TupleSearch(const CayleyTable& t, std::size_t size) : t_(t), size_(size) {
    for (Label a = 0; a < t.order(); ++a) max_order_ = std::max(max_order_, t.element_order(a));
  }

  bool run(std::vector<Label>& out) {
    tuple_.clear();
    if (!extend({}, 1)) return false;
    out = tuple_;
    return true;
  }

 private:
  bool extend(const std::vector<bool>& span, std::size_t span_size) {
    if (span_size == t_.order()) return tuple_.size() <= size_;
    std::size_t remaining = size_ - tuple_.size();
    if (remaining == 0) return false;
    // |<S, x1..xr>| <= |<S>| * maxord^r
    double reach = static_cast<double>(span_size);
    for (std::size_t i = 0; i < remaining; ++i) reach *= static_cast<double>(max_order_);
    if (reach < static_cast<double>(t_.order())) return false;
    if (failed_.count({span, remaining})) return false;
    for (Label x = 1; x < t_.order(); ++x) {
      if (!span.empty() && span[x]) continue;
      tuple_.push_back(x);
      auto [next, n] = span_of(t_, tuple_);
      if (extend(next, n)) return true;
      tuple_.pop_back();
    }
    failed_.insert({span, remaining});
    return false;
  }

  const CayleyTable& t_;
  std::size_t size_;
  std::size_t max_order_ = 1;
  std::vector<Label> tuple_;
  std::set<std::pair<std::vector<bool>, std::size_t>> failed_;
};

// Backtracking over images of a generating tuple, extending the partial map
// along Cayley-graph edges (spanning tree) and checking every other edge.
class HomSearch {
 public:
  HomSearch(const CayleyTable& t1, const CayleyTable& t2, std::vector<Label> gens)
      : t1_(t1), t2_(t2), gens_(std::move(gens)), phi_(t1.order(), kUnset), used_(t2.order(), false) {
    phi_[0] = 0;
    used_[0] = true;
    images_.resize(gens_.size());
  }

  bool run() { return assign(0); }

 private:
  static constexpr Label kUnset = ~Label{0};

  bool assign(std::size_t level) {
    if (level == gens_.size()) return true;
    for (Label y = 0; y < t2_.order(); ++y) {
      if (t2_.element_order(y) != t1_.element_order(gens_[level])) continue;
      images_[level] = y;
      std::vector<Label> trail;
      if (close(level, trail) && assign(level + 1)) return true;
      for (Label x : trail) {
        used_[phi_[x]] = false;
        phi_[x] = kUnset;
      }
    }
    return false;
  }

  // Extends phi over <gens[0..level]>; records new assignments in trail.
  bool close(std::size_t level, std::vector<Label>& trail) {
    std::vector<Label> queue;
    for (Label x = 0; x < t1_.order(); ++x)
      if (phi_[x] != kUnset) queue.push_back(x);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Label x = queue[head];
      for (std::size_t i = 0; i <= level; ++i) {
        Label xs = t1_.mul(x, gens_[i]);
        Label img = t2_.mul(phi_[x], images_[i]);
        if (phi_[xs] == kUnset) {
          if (used_[img]) return false;
          phi_[xs] = img;
          used_[img] = true;
          trail.push_back(xs);
          queue.push_back(xs);
        } else if (phi_[xs] != img) {
          return false;
        }
      }
    }
    return true;
  }

  const CayleyTable& t1_;
  const CayleyTable& t2_;
  std::vector<Label> gens_;
  std::vector<Label> images_;
  std::vector<Label> phi_;
  std::vector<bool> used_;
};

}  // namespace

std::vector<Label> minimal_generating_tuple(const CayleyTable& t) {
  if (t.order() == 1) return {};
  for (std::size_t k = 1;; ++k) {
    TupleSearch search(t, k);
    std::vector<Label> out;
    if (search.run(out)) return out;
  }
}

bool brute_force_iso(const CayleyTable& t1, const CayleyTable& t2) {
  if (t1.order() != t2.order()) return false;
  if (order_histogram(t1) != order_histogram(t2)) return false;
  if (t1.is_commutative() != t2.is_commutative()) return false;
  HomSearch search(t1, t2, minimal_generating_tuple(t1));
  return search.run();
}

std::vector<bool> exhaustive_membership(const CayleyTable& t, const std::vector<Label>& subset) {
  for (Label s : subset)
    if (s >= t.order()) throw std::out_of_range("exhaustive_membership: label out of range");
  return span_of(t, subset).first;
}

}  // namespace bbiso
