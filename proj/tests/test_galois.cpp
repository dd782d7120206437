#include <doctest.h>

#include <set>

#include "malle/catalog.hpp"
#include "malle/galois.hpp"

using namespace malle;

namespace {
int class_of(const FiniteGroup& G, const std::string& rep) {
  return G.classes().class_of[G.index_of(parse_perm(rep))];
}
} // namespace

TEST_CASE("constant datum over Q: A4") {
  auto A4 = catalog_group("A4");
  GaloisDatum d = constant_datum_over_Q(A4);
  CHECK(A4->exponent() == 6);
  CHECK(d.gamma->order() == 2); // (Z/6)^x
  TwistedClassSet tcs = twisted_classes(d);
  int c123 = class_of(*A4, "(1,2,3)");
  int c132 = class_of(*A4, "(1,3,2)");
  int c22 = class_of(*A4, "(1,2)(3,4)");
  int s = 1; // the nontrivial element of gamma
  CHECK(tcs.gamma_action[s][c123] == c132);
  CHECK(tcs.gamma_action[s][c132] == c123);
  CHECK(tcs.gamma_action[s][c22] == c22);
  // 3 nontrivial classes in 2 orbits
  CHECK(tcs.nontrivial_orbit_count() == 2);
}

TEST_CASE("constant datum over Q: S3 and C2") {
  auto S3 = catalog_group("S3");
  GaloisDatum d = constant_datum_over_Q(S3);
  TwistedClassSet tcs = twisted_classes(d);
  for (int s = 0; s < d.gamma->order(); ++s)
    for (int c = 0; c < tcs.count(); ++c) CHECK(tcs.gamma_action[s][c] == c);

  auto C2 = catalog_group("C2");
  GaloisDatum d2 = constant_datum_over_Q(C2);
  TwistedClassSet t2 = twisted_classes(d2);
  CHECK(t2.nontrivial_orbit_count() == 1);
}

TEST_CASE("D4 classes all Galois fixed") {
  auto D4 = catalog_group("D4");
  GaloisDatum d = constant_datum_over_Q(D4);
  TwistedClassSet tcs = twisted_classes(d);
  for (int s = 0; s < d.gamma->order(); ++s)
    for (int c = 0; c < tcs.count(); ++c) CHECK(tcs.gamma_action[s][c] == c);
  CHECK(tcs.nontrivial_orbit_count() == 4);
}

TEST_CASE("D_n rotation orbit counts tau(n)") {
  auto count_orbits = [&](const std::string& name) {
    auto G = catalog_group(name);
    GaloisDatum d = constant_datum_over_Q(G);
    return twisted_classes(d).nontrivial_orbit_count();
  };
  CHECK(count_orbits("D3") == 2);  // tau(3)
  CHECK(count_orbits("D5") == 2);  // tau(5)
  CHECK(count_orbits("D9") == 3);  // tau(9)
  CHECK(count_orbits("D15") == 4); // tau(15)
}

TEST_CASE("frobenius fixed classes") {
  auto A4 = catalog_group("A4");
  GaloisDatum d = constant_datum_over_Q(A4);
  TwistedClassSet tcs = twisted_classes(d);
  CHECK(frobenius_fixed_classes(tcs, d, 7).size() == 4);  // 7 = 1 mod 3: all + identity
  CHECK(frobenius_fixed_classes(tcs, d, 5).size() == 2);  // identity + (12)(34)
  CHECK_THROWS_WITH_AS(frobenius_fixed_classes(tcs, d, 3), doctest::Contains("bad place"),
                       std::runtime_error);
  // depends only on p mod N
  CHECK(frobenius_fixed_classes(tcs, d, 13) == frobenius_fixed_classes(tcs, d, 7));
  CHECK(frobenius_fixed_classes(tcs, d, 11) == frobenius_fixed_classes(tcs, d, 5));

  auto S3 = catalog_group("S3");
  GaloisDatum d3 = constant_datum_over_Q(S3);
  TwistedClassSet t3 = twisted_classes(d3);
  for (long long p : {5, 7, 11, 13}) CHECK(frobenius_fixed_classes(t3, d3, p).size() == 3);
}

TEST_CASE("rational characters") {
  for (const auto& name : {"S3", "S4", "S5"})
    CHECK(rational_characters(constant_datum_over_Q(catalog_group(name))).order() == 2);
  CHECK(rational_characters(constant_datum_over_Q(catalog_group("A4"))).order() == 1);
  CHECK(rational_characters(constant_datum_over_Q(catalog_group("D4"))).order() == 4);
  CHECK(rational_characters(constant_datum_over_Q(catalog_group("V4"))).order() == 4);
}

TEST_CASE("powering preserves class size and order") {
  for (const auto& name : {"A4", "D4", "Q8", "SL23"}) {
    auto G = catalog_group(name);
    GaloisDatum d = constant_datum_over_Q(G);
    TwistedClassSet tcs = twisted_classes(d);
    for (int s = 0; s < d.gamma->order(); ++s)
      for (int c = 0; c < tcs.count(); ++c) {
        int img = tcs.gamma_action[s][c];
        CHECK(tcs.classes.size(img) == tcs.classes.size(c));
        CHECK(G->order_of(tcs.classes.rep(img)) == G->order_of(tcs.classes.rep(c)));
      }
  }
}

TEST_CASE("inner twist: D4 reflections fuse") {
  auto D4 = catalog_group("D4");
  GaloisDatum d = constant_datum_over_Q(D4);
  int c13 = class_of(*D4, "(1,3)");
  auto M = D4->subgroup_generated(D4->classes().classes[c13]);
  CHECK(M.order() == 4);
  // gamma = (Z/4)^x = {1, 3}; lift the generator to (1,2)(3,4)
  std::vector<int> gens{1};
  std::vector<int> lift{D4->index_of(parse_perm("(1,2)(3,4)"))};
  GaloisDatum fd = inner_twist_datum(M, gens, lift, d);
  TwistedClassSet ftcs = twisted_classes(fd);
  // the two reflections (1,3) and (2,4) now form a single gamma orbit
  const FiniteGroup& Mg = *M.group;
  int m13 = ftcs.classes.class_of[M.from_parent[D4->index_of(parse_perm("(1,3)"))]];
  int m24 = ftcs.classes.class_of[M.from_parent[D4->index_of(parse_perm("(2,4)"))]];
  CHECK(m13 != m24);
  CHECK(ftcs.gamma_action[1][m13] == m24);
  CHECK(Mg.order() == 4);

  // trivial lift leaves the class data untouched
  GaloisDatum td = inner_twist_datum(M, gens, {D4->id()}, d);
  TwistedClassSet ttcs = twisted_classes(td);
  CHECK(ttcs.gamma_action[1][m13] == m13);
}

TEST_CASE("inner twist: lift must normalize") {
  auto S4 = catalog_group("S4");
  GaloisDatum d = constant_datum_over_Q(S4);
  auto C2 = S4->subgroup_generated({S4->index_of(parse_perm("(1,2)"))});
  std::vector<int> gens{1};
  CHECK_THROWS_WITH_AS(inner_twist_datum(C2, gens, {S4->index_of(parse_perm("(1,3)"))}, d),
                       doctest::Contains("normalize"), std::runtime_error);
}

TEST_CASE("weil restriction twist in C3 wr C2") {
  auto G = catalog_group("C3wrC2");
  GaloisDatum d = constant_datum_over_Q(G);
  // M = C3 x C3, lift of the quadratic character through the swap
  std::vector<int> gens33;
  for (int x = 0; x < G->order(); ++x)
    if (G->order_of(x) == 3) gens33.push_back(x);
  auto M = G->subgroup_generated(gens33);
  CHECK(M.order() == 9);
  // gamma = (Z/6)^x = {1,5}: index 1 is the nontrivial element
  std::vector<int> gens{1};
  std::vector<int> lift{G->index_of(parse_perm("(1,4)(2,5)(3,6)"))};
  GaloisDatum fd = inner_twist_datum(M, gens, lift, d);
  TwistedClassSet ftcs = twisted_classes(fd);
  // restricted discriminant has b = 2: orbits of minimal classes
  // minimal classes of disc restricted to M are the single-factor 3-cycles
  const FiniteGroup& Mg = *M.group;
  int orbits_of_deg2 = 0;
  std::set<std::vector<int>> seen;
  for (int c = 0; c < ftcs.count(); ++c) {
    if (c == ftcs.identity_class) continue;
    const Perm& p = Mg.perm(ftcs.classes.rep(c));
    if (p.degree() - p.num_orbits() != 2) continue; // ind = 2 classes
    auto orb = ftcs.orbit_of(c);
    if (seen.insert(orb).second) ++orbits_of_deg2;
  }
  CHECK(orbits_of_deg2 == 2);
}

TEST_CASE("explicit galois mode with a trivial quotient") {
  // C3 over a field containing the cube roots of unity: trivial gamma, so the
  // two nontrivial classes stay separate orbits
  auto C3 = catalog_group("C3");
  auto gamma = catalog_group("C1");
  GaloisDatum d = explicit_datum(C3, gamma, {}, {}, {}, 1, {0}, {{false, 0}});
  TwistedClassSet tcs = twisted_classes(d);
  CHECK(tcs.nontrivial_orbit_count() == 2);
}

TEST_CASE("explicit galois mode matching constant-over-Q") {
  // S3 with gamma = C2 acting trivially and cyc = -1 reproduces the rational
  // class data of the constant datum
  auto S3 = catalog_group("S3");
  auto gamma = catalog_group("C2");
  std::vector<std::vector<int>> autos;
  std::vector<int> ident(S3->order());
  for (int i = 0; i < S3->order(); ++i) ident[i] = i;
  autos.push_back(ident);
  std::vector<int> frob(6, -1);
  frob[1] = 0;
  frob[5] = 1;
  GaloisDatum d = explicit_datum(S3, gamma, {1}, autos, {5}, 6, frob, {{true, 1}});
  TwistedClassSet tcs = twisted_classes(d);
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c < tcs.count(); ++c) CHECK(tcs.gamma_action[s][c] == c);
}
