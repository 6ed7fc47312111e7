#include "doctest.h"

#include "bbiso/group_io.hpp"
#include "bbiso/metacyclic.hpp"
#include "bbiso/oracle.hpp"
#include "corpus.hpp"

using namespace bbiso;

namespace {

GroupHandle example_matrices() { return load_group_file(std::string(BBISO_FIXTURES) + "/gl3_541.json"); }

std::size_t span_size(const GroupHandle& g, const std::vector<Element>& gens) {
  return enumerate_span(g, gens).size();
}

const MetacyclicDecomposition& expect_decomposition(const Recognition& r) {
  if (auto* no = std::get_if<NotMetacyclic>(&r)) FAIL("refused: " << to_string(no->reason) << " " << no->detail);
  return std::get<MetacyclicDecomposition>(r);
}

}  // namespace

TEST_CASE("hall_membership") {
  auto s3 = corpus::s3();
  auto h = hall_membership(s3, factorize(3));
  CHECK(*h.membership(s3.identity()));
  CHECK(*h.membership(s3.generators()[0]));
  CHECK_FALSE(*h.membership(s3.generators()[1]));
  auto z6 = corpus::zmod({6}, {{1}});
  auto h2 = hall_membership(z6, factorize(2));
  CHECK(*h2.membership(Element({3})));
  CHECK_FALSE(*h2.membership(Element({2})));
}

TEST_CASE("solvable_data") {
  auto z12 = corpus::abelian({2, 6}, 2);
  auto d = solvable_data(z12, factorize(12));
  REQUIRE(d);
  CHECK(d->length() == 1);

  auto s3 = corpus::s3();
  auto ds = solvable_data(s3, factorize(6));
  REQUIRE(ds);
  CHECK(ds->length() == 2);
  CHECK(span_size(s3, ds->series[1].generators()) == 3);
  CHECK(span_size(s3, ds->series[2].generators()) == 1);
  for (const auto& x : enumerate_span(s3, s3.generators()).elements()) {
    auto w = ds->membership(x);
    REQUIRE(w);
    CHECK(s3.equal(ds->presentation.lift(*w), x));
  }
  for (const auto& r : ds->presentation.relators) CHECK(s3.is_identity(ds->presentation.lift(r)));

  CHECK_FALSE(solvable_data(corpus::a5(), factorize(60)));

  // longer series
  for (const auto& g : {corpus::a4(), corpus::q8(), corpus::d4(), corpus::s3xz2(), corpus::semidirect(4, 5, 2)}) {
    auto n = *g.known_order();
    auto dg = solvable_data(g, n);
    REQUIRE(dg);
    for (const auto& x : enumerate_span(g, g.generators()).elements()) {
      auto w = dg->membership(x);
      REQUIRE(w);
      CHECK(g.equal(dg->presentation.lift(*w), x));
    }
    for (const auto& r : dg->presentation.relators) CHECK(g.is_identity(dg->presentation.lift(r)));
  }
  // non-members of a subgroup are refused
  auto s4 = corpus::perm(4, {{1, 2, 3, 0}, {1, 0, 2, 3}});
  auto a4 = corpus::a4();
  auto da = solvable_data(a4, factorize(12));
  REQUIRE(da);
  for (const auto& x : enumerate_span(s4, s4.generators()).elements()) {
    bool even = enumerate_span(a4, a4.generators()).find(x).has_value();
    CHECK(da->membership(x).has_value() == even);
  }
}

TEST_CASE("solvable_data of a quotient") {
  // G = Z/3 x| Z/7, quotient by the Hall 7-subgroup
  auto g = corpus::semidirect(3, 7, 2);
  auto q = quotient(g, hall_membership(g, factorize(7)));
  auto d = solvable_data(q, factorize(3));
  REQUIRE(d);
  CHECK(d->length() == 1);
  for (const auto& x : enumerate_span(g, g.generators()).elements()) {
    auto w = d->presentation.rewrite(x);
    REQUIRE(w);
    // x^-1 phi(psi(x)) lies in B
    CHECK(q.is_identity(g.multiply(g.inverse(x), d->presentation.lift(*w))));
  }
  for (const auto& r : d->presentation.relators) CHECK(q.is_identity(d->presentation.lift(r)));
}

TEST_CASE("cyclic_normal_generators") {
  // quotient trivial: B = G
  auto z7 = corpus::zmod({7}, {{3}});
  auto q = quotient(z7, hall_membership(z7, factorize(7)));
  auto d = solvable_data(q, factorize(1));
  REQUIRE(d);
  CHECK(span_size(z7, cyclic_normal_generators(z7, d->presentation)) == 7);

  for (auto [c, dd, v] : {std::tuple<u64, u64, u64>{3, 7, 2}, {2, 5, 4}, {3, 7, 1}}) {
    for (const auto& g : {corpus::semidirect(c, dd, v), corpus::semidirect_perm(c, dd, v)}) {
      auto qg = quotient(g, hall_membership(g, factorize(dd)));
      auto dg = solvable_data(qg, factorize(c));
      REQUIRE(dg);
      auto gens = cyclic_normal_generators(g, dg->presentation);
      CHECK(span_size(g, gens) == dd);
      for (const auto& x : gens) CHECK(g.is_identity(g.power(x, dd)));
    }
  }
  // lifted symbols of order 3 (generator u) still recover B
  auto b = std::make_shared<SemidirectBackend>(3, 7, 2);
  GroupHandle g(b, {b->make(1, 0), b->make(1, 1)}, factorize(21));
  auto qg = quotient(g, hall_membership(g, factorize(7)));
  auto dg = solvable_data(qg, factorize(3));
  REQUIRE(dg);
  CHECK(span_size(g, cyclic_normal_generators(g, dg->presentation)) == 7);
}

TEST_CASE("normal_sylow") {
  auto z6 = corpus::zmod({6}, {{1}});
  auto d6 = solvable_data(z6, factorize(6));
  auto p3 = normal_sylow(*d6, 3);
  REQUIRE(p3);
  auto span = enumerate_span(z6, *p3);
  CHECK(span.size() == 3);
  for (const auto& x : span.elements()) CHECK(x[0] % 2 == 0);

  auto s3 = corpus::s3();
  auto ds = solvable_data(s3, factorize(6));
  auto a3 = normal_sylow(*ds, 3);
  REQUIRE(a3);
  CHECK(span_size(s3, *a3) == 3);
  CHECK_FALSE(normal_sylow(*ds, 2));

  // positive answers are normal p-subgroups of full p-part order
  std::vector<GroupHandle> groups = {corpus::a4(), corpus::q8(), corpus::d4(), corpus::s3xz2(),
                                     corpus::semidirect(4, 5, 2), corpus::semidirect(4, 9, 8),
                                     corpus::semidirect_perm(6, 7, 3), corpus::abelian({2, 12}, 3)};
  for (const auto& g : groups) {
    auto n = *g.known_order();
    auto dg = solvable_data(g, n);
    REQUIRE(dg);
    auto table = enumerate_group(g);
    for (u64 p : n.primes()) {
      auto gens = normal_sylow(*dg, p);
      // oracle: number of elements of p-power order equals |P| iff P is normal
      u64 ppower = 0;
      for (CayleyTable::Label a = 0; a < table.table.order(); ++a) {
        u64 o = table.table.element_order(a);
        while (o % p == 0) o /= p;
        if (o == 1) ++ppower;
      }
      bool unique = ppower == n.prime_power_part(p);
      REQUIRE(gens.has_value() == unique);
      if (!gens) continue;
      auto sp = enumerate_span(g, *gens);
      CHECK(sp.size() == n.prime_power_part(p));
      for (const auto& h : *gens)
        for (const auto& y : g.generators()) CHECK(sp.find(g.conjugate(h, y)));
    }
  }
}

TEST_CASE("deconjugate on the GL3(541) example") {
  auto g = example_matrices();
  const Element& x = g.generators()[0];
  const Element& y = g.generators()[1];
  Rng rng(1);
  std::vector<DeconjugateStep> trace;
  u64 v = deconjugate(g, x, y, factorize(108), factorize(541), rng, {}, &trace);
  CHECK(v == 316);
  CHECK(g.equal(g.conjugate(y, x), g.power(y, 316)));
  // intermediate relations
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].a == 4);
  CHECK(trace[0].result == 540);
  CHECK(trace[1].a == 27);
  CHECK(trace[1].result == 505);
  CHECK(g.equal(g.conjugate(y, g.power(x, 27)), g.power(y, 540)));
  CHECK(g.equal(g.conjugate(y, g.power(x, 4)), g.power(y, 505)));

  // base cases directly
  Rng r2(9);
  CHECK(deconjugate_prime_powers(g, g.power(x, 27), y, {2, 2}, {541, 1}, r2) == 540);
  CHECK(deconjugate_prime_powers(g, g.power(x, 4), y, {3, 3}, {541, 1}, r2) == 505);

  // x^2 has order 54 and x^54 centralises y
  Element x2 = g.power(x, 2);
  u64 v2 = deconjugate(g, x2, y, factorize(108), factorize(541), rng);
  CHECK(v2 == mul_mod(316, 316, 541));
  CHECK(deconjugate(g, g.power(x, 54), y, factorize(108), factorize(541), rng) == 1);
}

TEST_CASE("deconjugate small cases") {
  Rng rng(2);
  auto z = corpus::zmod({3, 5}, {{1, 0}, {0, 1}});
  CHECK(deconjugate(z, z.generators()[0], z.generators()[1], factorize(3), factorize(5), rng) == 1);
  auto g = corpus::semidirect(3, 7, 2);
  CHECK(deconjugate(g, g.generators()[0], g.generators()[1], factorize(3), factorize(7), rng) == 2);
  auto h = corpus::semidirect_perm(3, 7, 4);
  CHECK(deconjugate(h, h.generators()[0], h.generators()[1], factorize(3), factorize(7), rng) == 4);
  // composite b with CRT
  auto c = corpus::semidirect(2, 15, 14);
  CHECK(deconjugate(c, c.generators()[0], c.generators()[1], factorize(2), factorize(15), rng) == 14);
  auto c2 = corpus::semidirect(4, 15, 2);
  CHECK(deconjugate(c2, c2.generators()[0], c2.generators()[1], factorize(4), factorize(15), rng) == 2);
  // y^x outside <y>
  auto s4 = corpus::perm(4, {{1, 0, 2, 3}, {0, 2, 3, 1}});
  CHECK_THROWS_AS(deconjugate(s4, s4.generators()[0], s4.generators()[1], factorize(2), factorize(3), rng),
                  PreconditionViolation);
}

TEST_CASE("recognize_coprime_metacyclic") {
  Rng rng(5);
  auto z15 = corpus::zmod({15}, {{1}});
  auto r_d = recognize_coprime_metacyclic(z15, factorize(15), 2.0, rng);
  auto& d = expect_decomposition(r_d);
  CHECK(d.c.value() * d.d.value() == 15);
  CHECK(d.action_v == 1);

  for (const auto& g : {corpus::semidirect(3, 7, 2), corpus::semidirect_perm(3, 7, 2)}) {
    auto r = recognize_coprime_metacyclic(g, factorize(21), 3.0, rng);
    auto& m = expect_decomposition(r);
    CHECK(m.c.value() == 3);
    CHECK(m.d.value() == 7);
    CHECK((m.action_v == 2 || m.action_v == 4));
    CHECK(g.equal(g.conjugate(m.k_generator, m.u_generator), g.power(m.k_generator, m.action_v)));
  }
  for (const auto& g : {corpus::s3xz2(), corpus::a4(), corpus::q8(), corpus::d4()}) {
    auto r = recognize_coprime_metacyclic(g, *g.known_order(), 3.0, rng);
    CHECK(std::holds_alternative<NotMetacyclic>(r));
  }
  auto q8 = recognize_coprime_metacyclic(corpus::q8(), factorize(8), 3.0, rng);
  CHECK(std::get<NotMetacyclic>(q8).reason == RefusalReason::non_cyclic_sylow);
  auto a4 = recognize_coprime_metacyclic(corpus::a4(), factorize(12), 3.0, rng);
  CHECK(std::get<NotMetacyclic>(a4).reason == RefusalReason::non_cyclic_sylow);
  auto a5 = recognize_coprime_metacyclic(corpus::a5(), factorize(60), 6.0, rng);
  CHECK(std::get<NotMetacyclic>(a5).reason == RefusalReason::non_solvable);

  // a normal Sylow subgroup of G/B that does not centralise B
  auto g = corpus::semidirect(5, 11, 3);
  auto r_m = recognize_coprime_metacyclic(g, factorize(55), 6.0, rng);
  auto& m = expect_decomposition(r_m);
  CHECK(m.c.value() == 5);
  CHECK(m.d.value() == 11);

  // with the default threshold for the GL3(541) group
  auto ex = example_matrices();
  auto r_e = recognize_coprime_metacyclic(ex, factorize(58428), 3.0, rng);
  auto& e = expect_decomposition(r_e);
  CHECK(e.c.value() * e.d.value() == 58428);
  CHECK(e.d.value() % 541 == 0);
}

TEST_CASE("iso_metacyclic") {
  Rng rng(6);
  auto g = corpus::semidirect(3, 7, 2);
  auto h = corpus::semidirect(3, 7, 4);
  auto z21 = corpus::zmod({21}, {{1}});
  CHECK(iso_metacyclic(g, g, factorize(21), 3.0, rng));
  CHECK(iso_metacyclic(g, h, factorize(21), 3.0, rng));
  CHECK(iso_metacyclic(g, corpus::semidirect_perm(3, 7, 2), factorize(21), 3.0, rng));
  CHECK_FALSE(iso_metacyclic(g, z21, factorize(21), 3.0, rng));
  try {
    iso_metacyclic(g, corpus::zmod({3, 7}, {{1, 0}, {0, 1}}).with_known_order(factorize(21)), factorize(21), 3.0,
                   rng);
  } catch (...) {
    FAIL("Z/3 x Z/7 is coprime meta-cyclic");
  }
  bool thrown = false;
  try {
    iso_metacyclic(corpus::a4(), corpus::a4(), factorize(12), 3.0, rng);
  } catch (const NotCoprimeMetacyclic& e) {
    thrown = true;
    CHECK(e.which == 0);
  }
  CHECK(thrown);
}

TEST_CASE("standard_iso_witness") {
  auto a = factorize(108), b = factorize(541);
  auto w = standard_iso_witness(a, b, 316, 316);
  REQUIRE(w);
  CHECK(std::gcd(w->first, u64{108}) == 1);
  CHECK(pow_mod(316, w->first, 541) == 316);
  CHECK(w->first % multiplicative_order(316, 541) == 1);
  u64 lt = pow_mod(316, 5, 541);
  auto w2 = standard_iso_witness(a, b, 316, lt);
  REQUIRE(w2);
  CHECK(std::gcd(w2->first, u64{108}) == 1);
  CHECK(pow_mod(lt, w2->first, 541) == 316);
  CHECK_FALSE(standard_iso_witness(factorize(6), factorize(7), 2, 3));
}
