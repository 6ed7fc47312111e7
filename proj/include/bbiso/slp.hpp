#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbiso/numtheory.hpp"

namespace bbiso {

// Straight-line program over generator indices. Nodes are immutable and
// shared, so an SLP is a DAG and copies are cheap.
class Slp {
 public:
  enum class Op { generator, identity, product, inverse, power };

  Slp();  // identity

  static Slp identity();
  static Slp generator(std::size_t index);
  static Slp product(const Slp& a, const Slp& b);
  static Slp inverse(const Slp& a);
  static Slp power(const Slp& a, i64 exponent);
  // Left-to-right product; identity for an empty list.
  static Slp product_of(const std::vector<Slp>& factors);

  Op op() const;
  std::size_t index() const;
  i64 exponent() const;
  Slp left() const;
  Slp right() const;

  // Largest generator index referenced, if any.
  std::optional<std::size_t> max_index() const;
  std::size_t node_count() const;

  // Replaces every generator(i) by images[i].
  Slp substitute(const std::vector<Slp>& images) const;
  // generator(i) -> generator(i + offset)
  Slp shift(std::size_t offset) const;

  std::string to_string() const;

  struct Node;
  const Node* node() const { return node_.get(); }

 private:
  explicit Slp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Slp::Node {
  Op op;
  std::size_t index = 0;
  i64 exponent = 0;
  std::shared_ptr<const Node> left, right;
  long max_index = -1;
};

}  // namespace bbiso
