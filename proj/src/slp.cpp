#include "bbiso/slp.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bbiso {

namespace {

using NodePtr = std::shared_ptr<const Slp::Node>;

NodePtr make_node(Slp::Op op, std::size_t index, i64 exponent, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Slp::Node>();
  n->op = op;
  n->index = index;
  n->exponent = exponent;
  n->max_index = op == Slp::Op::generator ? static_cast<long>(index) : -1;
  if (l) n->max_index = std::max(n->max_index, l->max_index);
  if (r) n->max_index = std::max(n->max_index, r->max_index);
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

const NodePtr& identity_node() {
  static const NodePtr id = make_node(Slp::Op::identity, 0, 0, nullptr, nullptr);
  return id;
}

// Children before parents, each node once.
std::vector<const Slp::Node*> post_order(const Slp::Node* root) {
  std::vector<const Slp::Node*> order;
  std::unordered_set<const Slp::Node*> done;
  std::vector<std::pair<const Slp::Node*, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (done.count(n)) continue;
    if (expanded) {
      done.insert(n);
      order.push_back(n);
      continue;
    }
    stack.push_back({n, true});
    if (n->right && !done.count(n->right.get())) stack.push_back({n->right.get(), false});
    if (n->left && !done.count(n->left.get())) stack.push_back({n->left.get(), false});
  }
  return order;
}

}  // namespace

Slp::Slp() : node_(identity_node()) {}

Slp Slp::identity() { return Slp(identity_node()); }

Slp Slp::generator(std::size_t index) { return Slp(make_node(Op::generator, index, 0, nullptr, nullptr)); }

Slp Slp::product(const Slp& a, const Slp& b) {
  if (a.op() == Op::identity) return b;
  if (b.op() == Op::identity) return a;
  return Slp(make_node(Op::product, 0, 0, a.node_, b.node_));
}

Slp Slp::inverse(const Slp& a) {
  if (a.op() == Op::identity) return a;
  return Slp(make_node(Op::inverse, 0, 0, a.node_, nullptr));
}

Slp Slp::power(const Slp& a, i64 exponent) {
  if (exponent == 0 || a.op() == Op::identity) return identity();
  if (exponent == 1) return a;
  return Slp(make_node(Op::power, 0, exponent, a.node_, nullptr));
}

Slp Slp::product_of(const std::vector<Slp>& factors) {
  Slp acc = identity();
  for (const auto& f : factors) acc = product(acc, f);
  return acc;
}

Slp::Op Slp::op() const { return node_->op; }
std::size_t Slp::index() const { return node_->index; }
i64 Slp::exponent() const { return node_->exponent; }
Slp Slp::left() const { return node_->left ? Slp(node_->left) : identity(); }
Slp Slp::right() const { return node_->right ? Slp(node_->right) : identity(); }

std::optional<std::size_t> Slp::max_index() const {
  if (node_->max_index < 0) return std::nullopt;
  return static_cast<std::size_t>(node_->max_index);
}

std::size_t Slp::node_count() const { return post_order(node_.get()).size(); }

Slp Slp::substitute(const std::vector<Slp>& images) const {
  std::unordered_map<const Node*, Slp> memo;
  for (const Node* n : post_order(node_.get())) {
    Slp out;
    switch (n->op) {
      case Op::identity:
        out = identity();
        break;
      case Op::generator:
        if (n->index >= images.size()) throw std::out_of_range("SLP generator index out of range");
        out = images[n->index];
        break;
      case Op::product:
        out = product(memo.at(n->left.get()), memo.at(n->right.get()));
        break;
      case Op::inverse:
        out = inverse(memo.at(n->left.get()));
        break;
      case Op::power:
        out = power(memo.at(n->left.get()), n->exponent);
        break;
    }
    memo.emplace(n, std::move(out));
  }
  return memo.at(node_.get());
}

Slp Slp::shift(std::size_t offset) const {
  if (!max_index()) return *this;
  std::vector<Slp> images;
  for (std::size_t i = 0; i <= *max_index(); ++i) images.push_back(generator(i + offset));
  return substitute(images);
}

std::string Slp::to_string() const {
  std::unordered_map<const Node*, std::string> memo;
  for (const Node* n : post_order(node_.get())) {
    std::string s;
    switch (n->op) {
      case Op::identity:
        s = "1";
        break;
      case Op::generator:
        s = "x" + std::to_string(n->index);
        break;
      case Op::product:
        s = "(" + memo.at(n->left.get()) + "*" + memo.at(n->right.get()) + ")";
        break;
      case Op::inverse:
        s = memo.at(n->left.get()) + "^-1";
        break;
      case Op::power:
        s = memo.at(n->left.get()) + "^" + std::to_string(n->exponent);
        break;
    }
    memo.emplace(n, std::move(s));
  }
  return memo.at(node_.get());
}

}  // namespace bbiso
