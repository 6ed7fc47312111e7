#include <cmath>
#include <set>

#include "doctest.h"

#include "bbiso/group_io.hpp"
#include "bbiso/oracle.hpp"
#include "corpus.hpp"

using namespace bbiso;

namespace {

Slp random_slp(Rng& rng, std::size_t gens, int depth) {
  if (depth == 0 || rng.below(4) == 0) return rng.below(5) ? Slp::generator(rng.below(gens)) : Slp::identity();
  switch (rng.below(3)) {
    case 0: return Slp::product(random_slp(rng, gens, depth - 1), random_slp(rng, gens, depth - 1));
    case 1: return Slp::inverse(random_slp(rng, gens, depth - 1));
    default: return Slp::power(random_slp(rng, gens, depth - 1), static_cast<i64>(rng.below(41)) - 20);
  }
}

// k-fold product, the reference semantics of Power
Element naive_power(const GroupHandle& g, const Element& x, i64 k) {
  Element base = k < 0 ? g.inverse(x) : x;
  Element r = g.identity();
  for (i64 i = 0; i < std::llabs(k); ++i) r = g.multiply(r, base);
  return r;
}

GroupHandle example_matrices() {
  return load_group_file(std::string(BBISO_FIXTURES) + "/gl3_541.json");
}

}  // namespace

TEST_CASE("backends reject malformed elements") {
  ZmodBackend z({6, 4});
  CHECK(z.make({7, -1}) == Element({1, 3}));
  CHECK_THROWS(z.make({1}));
  PermBackend p(3);
  CHECK_THROWS(p.make({0, 0, 1}));
  CHECK_THROWS(p.make({0, 1, 3}));
  CHECK(p.from_cycles({{0, 1, 2}}) == p.make({1, 2, 0}));
  MatmodBackend m(5, 2);
  CHECK_THROWS(m.make({{1, 2}, {2, 4}}));
  CHECK_THROWS(SemidirectBackend(3, 7, 3));  // 3^3 = 6 mod 7
  CHECK_THROWS(UnitsBackend(9).make(3));
}

TEST_CASE("matmod inverse and determinant") {
  auto g = example_matrices();
  for (const auto& x : g.generators()) {
    CHECK(g.is_identity(g.multiply(x, g.inverse(x))));
    CHECK(g.is_identity(g.multiply(g.inverse(x), x)));
  }
  const auto& mb = dynamic_cast<const MatmodBackend&>(g.backend());
  CHECK(mb.determinant(g.generators()[1]) == 1);
}

TEST_CASE("evaluate_slp examples") {
  auto z5 = corpus::zmod({5}, {{1}});
  CHECK(evaluate_slp(z5, Slp::identity()) == z5.identity());
  CHECK(evaluate_slp(z5, Slp::generator(0)) == Element({1}));
  auto z5b = corpus::zmod({5}, {{2}});
  CHECK(evaluate_slp(z5b, Slp::power(Slp::generator(0), 3)) == Element({1}));
  CHECK_THROWS_AS(evaluate_slp(z5, Slp::generator(1)), std::out_of_range);
}

TEST_CASE("SLP evaluation is a homomorphism and Power is repeated product") {
  Rng rng(7);
  std::vector<GroupHandle> groups = {corpus::zmod({12, 5}, {{1, 0}, {3, 1}}), corpus::s3(), corpus::q8(),
                                     example_matrices(), corpus::semidirect(4, 5, 2)};
  for (const auto& g : groups) {
    const std::size_t k = g.generators().size();
    for (int t = 0; t < 1000; ++t) {
      Slp a = random_slp(rng, k, 4), b = random_slp(rng, k, 4);
      REQUIRE(g.equal(evaluate_slp(g, Slp::product(a, b)), g.multiply(evaluate_slp(g, a), evaluate_slp(g, b))));
    }
    for (i64 e = -30; e <= 30; ++e)
      REQUIRE(g.equal(evaluate_slp(g, Slp::power(Slp::generator(0), e)), naive_power(g, g.generators()[0], e)));
  }
}

TEST_CASE("deep SLPs evaluate without recursion") {
  Slp s = Slp::generator(0);
  for (int i = 0; i < 200000; ++i) s = Slp::product(s, Slp::generator(0));
  auto z7 = corpus::zmod({7}, {{1}});
  CHECK(evaluate_slp(z7, s) == Element({200001 % 7}));
}

TEST_CASE("element_order") {
  auto g = example_matrices();
  CHECK(element_order(g, g.identity()).value() == 1);
  CHECK(element_order(g, g.generators()[0]).value() == 108);
  CHECK(element_order(g, g.generators()[1]).value() == 541);
  CHECK_THROWS_AS(element_order(corpus::zmod({5}, {{1}}), Element({1})), std::invalid_argument);
  // property: order divides n, order/p is not an exponent
  Rng rng(3);
  auto s = corpus::with_order(corpus::perm(7, {{1, 2, 3, 4, 5, 6, 0}, {1, 0, 2, 3, 4, 5, 6}}), 5040);
  for (int t = 0; t < 200; ++t) {
    auto [x, w] = random_element(s, rng);
    auto o = element_order(s, x);
    REQUIRE(o.divides(factorize(5040)));
    REQUIRE(s.is_identity(s.power(x, o.value())));
    for (u64 p : o.primes()) REQUIRE_FALSE(s.is_identity(s.power(x, o.value() / p)));
  }
}

TEST_CASE("random_element") {
  auto z7 = corpus::zmod({7}, {{1}});
  Rng rng(11);
  ProductReplacer pr(z7, rng);
  std::vector<int> freq(7, 0);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    auto [x, w] = pr.next();
    // words grow linearly, so only spot-check them
    if (i % 500 == 0) REQUIRE(evaluate_slp(z7, w) == x);
    ++freq[x[0]];
  }
  const double mean = samples / 7.0, sigma = std::sqrt(samples * (1.0 / 7) * (6.0 / 7));
  for (int f : freq) CHECK(std::abs(f - mean) < 5 * sigma);

  Rng r1(5), r2(5);
  auto g = corpus::s3();
  for (int i = 0; i < 20; ++i) CHECK(random_element(g, r1).first == random_element(g, r2).first);
  auto [x, w] = random_element(corpus::q8(), r1);
  CHECK(evaluate_slp(corpus::q8(), w) == x);
}

TEST_CASE("normal_closure") {
  auto s3 = corpus::s3();
  auto t = normal_closure(s3, {s3.identity()});
  CHECK(t.size() == 1);
  CHECK(s3.is_identity(t[0]));
  auto a3 = normal_closure(s3, {s3.generators()[0]});
  CHECK(enumerate_span(s3, a3).size() == 3);
  CHECK(enumerate_span(s3, normal_closure(s3, {s3.generators()[1]})).size() == 6);
  // conjugation stability
  auto a5 = corpus::a5();
  auto c = normal_closure(a5, {a5.generators()[1]});
  auto span = enumerate_span(a5, c);
  CHECK(span.size() == 60);
  for (const auto& x : c)
    for (const auto& h : a5.generators()) CHECK(span.find(a5.conjugate(x, h)));
  CHECK_THROWS_AS(normal_closure(a5, {a5.generators()[1]}, 10), EnumerationBoundExceeded);
}

TEST_CASE("derived_subgroup") {
  CHECK(enumerate_span(corpus::zmod({4, 6}, {{1, 0}, {0, 1}}),
                       derived_subgroup(corpus::zmod({4, 6}, {{1, 0}, {0, 1}})).generators())
            .size() == 1);
  auto s3 = corpus::s3();
  auto d = derived_subgroup(s3);
  CHECK(enumerate_span(s3, d.generators()).size() == 3);
  auto g = corpus::semidirect(3, 7, 2);
  auto span = enumerate_span(g, derived_subgroup(g).generators());
  CHECK(span.size() == 7);
  for (const auto& x : span.elements()) CHECK(x[0] == 0);
  // trivial iff the Cayley table is commutative
  std::vector<GroupHandle> corpus_groups = {corpus::s3(), corpus::q8(), corpus::d4(), corpus::a4(),
                                            corpus::s3xz2(), corpus::semidirect(5, 11, 3),
                                            corpus::semidirect(4, 5, 4), corpus::abelian({2, 6}, 2),
                                            corpus::abelian({3, 3, 9}, 1), corpus::semidirect(2, 9, 1)};
  for (const auto& h : corpus_groups) {
    bool trivial = enumerate_span(h, derived_subgroup(h).generators()).size() == 1;
    CHECK(trivial == enumerate(h).is_commutative());
  }
}

TEST_CASE("quotient") {
  auto z6 = corpus::zmod({6}, {{1}});
  auto trivial = quotient(z6, Congruence{[&](const Element& x) -> std::optional<bool> { return z6.is_identity(x); }});
  CHECK(enumerate_span(trivial, trivial.generators()).size() == 6);
  auto q = quotient(z6, Congruence{[](const Element& x) -> std::optional<bool> { return x[0] % 3 == 0; }});
  CHECK(enumerate_span(q, q.generators()).size() == 3);
  CHECK(q.equal(Element({1}), Element({4})));
  auto s3 = corpus::s3();
  auto a3 = enumerate_span(s3, {s3.generators()[0]});
  auto qs = quotient(s3, Congruence{[a3](const Element& x) -> std::optional<bool> { return a3.find(x).has_value(); }});
  CHECK(enumerate_span(qs, qs.generators()).size() == 2);
  auto undefined = quotient(z6, Congruence{[](const Element&) -> std::optional<bool> { return std::nullopt; }});
  CHECK_THROWS_AS(undefined.equal(Element({1}), Element({2})), UndefinedOperation);
  CHECK_FALSE(undefined.try_equal(Element({1}), Element({2})).has_value());
}

TEST_CASE("equality is a congruence") {
  auto g = corpus::semidirect(3, 7, 2);
  auto q = quotient(g, Congruence{[&](const Element& x) -> std::optional<bool> { return x[0] == 0; }});
  Rng rng(9);
  auto elems = enumerate_span(g, g.generators()).elements();
  for (int t = 0; t < 2000; ++t) {
    const auto& x = elems[rng.below(elems.size())];
    const auto& y = elems[rng.below(elems.size())];
    const auto& z = elems[rng.below(elems.size())];
    const auto& w = elems[rng.below(elems.size())];
    if (q.equal(x, y) && q.equal(z, w)) REQUIRE(q.equal(q.multiply(x, z), q.multiply(y, w)));
    REQUIRE(q.equal(x, x));
    REQUIRE(q.equal(x, y) == q.equal(y, x));
  }
}

TEST_CASE("group file format") {
  auto g = parse_group(R"({"kind":"zmod","moduli":[6],"generators":[[1]],"order":6})");
  CHECK(g.known_order()->value() == 6);
  CHECK_THROWS_AS(parse_group(R"({"kind":"zmod","moduli":[6],"generators":[]})"), GroupFormatError);
  CHECK_THROWS_AS(parse_group(R"({"kind":"zmod","moduli":[6],"generators":[[1]],"extra":1})"), GroupFormatError);
  CHECK_THROWS_AS(parse_group(R"({"kind":"zmod","moduli":[6],"generators":[[1]],"order":4})"), GroupFormatError);
  CHECK_THROWS_AS(parse_group(R"({"kind":"perm","degree":3,"generators":[[0,0,1]]})"), GroupFormatError);
  CHECK_THROWS_AS(parse_group(R"({"kind":"blob","generators":[[1]]})"), GroupFormatError);
  CHECK_THROWS_AS(parse_group("not json"), GroupFormatError);
  CHECK_THROWS_AS(parse_group(R"({"kind":"zmod","moduli":[6],"generators":[[1]],"order":6,"order_factors":[[2,1],[5,1]]})"),
                  GroupFormatError);
  auto m = example_matrices();
  auto back = parse_group(serialize_group(m));
  CHECK(back.generators() == m.generators());
  CHECK(*back.known_order() == *m.known_order());
  auto sd = parse_group(serialize_group(corpus::semidirect(3, 7, 2)));
  CHECK(sd.backend().kind() == "semidirect");
}
