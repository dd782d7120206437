#include <doctest.h>

#include <random>
#include <set>

#include "malle/brauer.hpp"
#include "malle/catalog.hpp"

using namespace malle;

namespace {
struct Ctx {
  std::shared_ptr<FiniteGroup> G;
  GaloisDatum d;
  TwistedClassSet tcs;
  std::vector<int> full;
  explicit Ctx(const std::string& name)
      : G(catalog_group(name)), d(constant_datum_over_Q(G)), tcs(twisted_classes(d)) {
    for (int c = 0; c < tcs.count(); ++c)
      if (c != tcs.identity_class) full.push_back(c);
  }
  int cls(const std::string& rep) const {
    return tcs.classes.class_of[G->index_of(parse_perm(rep))];
  }
};

std::vector<int> three_cycle_support(const Ctx& c) {
  std::vector<int> sup;
  for (int cl : c.full)
    if (c.G->order_of(c.tcs.classes.rep(cl)) == 3) sup.push_back(cl);
  return sup;
}
} // namespace

TEST_CASE("algebraic brauer") {
  // A4 with 3-cycle support: induced lattice, H^1 = 0 (Shapiro)
  Ctx a4("A4");
  CHECK(algebraic_brauer(a4.d, a4.tcs, three_cycle_support(a4)).group.trivial());

  // trivial Galois action on a generating support: 0
  Ctx s4("S4");
  CHECK(algebraic_brauer(s4.d, s4.tcs, s4.full).group.trivial());

  // Z/4 with weights (1,2,1): support = the two minimal classes; order 2
  // (the class of -4)
  Ctx c4("C4");
  std::vector<int> c4sup{c4.cls("(1,2,3,4)"), c4.cls("(1,4,3,2)")};
  std::sort(c4sup.begin(), c4sup.end());
  AlgebraicBrauer ab = algebraic_brauer(c4.d, c4.tcs, c4sup);
  CHECK(ab.group.order() == 2);
  auto res = residue_data_algebraic(ab, 0, c4.d, c4.tcs);
  // orbit of the order-2 element (1,3)(2,4) carries the Dirichlet character mod 4
  auto orbits = c4.tcs.orbits();
  int o2 = -1;
  for (size_t i = 0; i < orbits.size(); ++i)
    if (orbits[i][0] == c4.cls("(1,3)(2,4)")) o2 = (int)i;
  REQUIRE(o2 >= 0);
  CHECK(res[o2].kind == ResidueKind::AlgebraicCharacter);
  CHECK(res[o2].modulus == 4);
  CHECK(*res[o2].value[1] == 0);
  CHECK(*res[o2].value[3] == Rat(1, 2));

  // Z/8 radical support (all classes): Grunwald-Wang class, order 2
  Ctx c8("C8");
  CHECK(algebraic_brauer(c8.d, c8.tcs, c8.full).group.order() == 2);
}

TEST_CASE("geometric brauer cuts") {
  // abelian with generating support: 0
  Ctx v4("V4");
  CHECK(geometric_brauer(v4.d, v4.tcs, v4.full).cut.trivial());

  // S4 with a transposition in the support: 0
  Ctx s4("S4");
  CHECK(geometric_brauer(s4.d, s4.tcs, s4.full).cut.trivial());

  // A4 with 3-cycle support only: Z/2
  Ctx a4("A4");
  GeometricBrauer g3 = geometric_brauer(a4.d, a4.tcs, three_cycle_support(a4));
  CHECK(g3.cut.order() == 2);
  CHECK(g3.invariant.order() == 2);

  // A4 with the order-2 class included: 0
  GeometricBrauer gall = geometric_brauer(a4.d, a4.tcs, a4.full);
  CHECK(gall.cut.trivial());
}

TEST_CASE("extension from cocycle") {
  Ctx a4("A4");
  // zero cocycle: direct product
  TwoCocycle z = TwoCocycle::zero(*a4.G, 2);
  CentralExtension ze = extension_from_cocycle(*a4.G, z);
  CHECK(ze.E->order() == 24);
  int zinvs = 0;
  for (int x = 0; x < 24; ++x)
    if (ze.E->order_of(x) == 2) ++zinvs;
  CHECK(zinvs > 1); // product has many involutions

  // the nontrivial class at modulus 2: SL(2,F3)-like double cover
  GeometricBrauer g3 = geometric_brauer(a4.d, a4.tcs, three_cycle_support(a4));
  TwoCocycle f12 = g3.invariant_gen_cocycle(0, *a4.G);
  CHECK(f12.n == 12);
  // reduce through the report pipeline instead: build at modulus 12 then check
  // the descent machinery handles the mod-2 reduction (below, via brauer_report)
}

TEST_CASE("marking descent search") {
  Ctx a4("A4");
  auto sup3 = three_cycle_support(a4);
  BrauerReport rep = brauer_report(a4.d, a4.tcs, sup3);
  REQUIRE(rep.descended.size() == 1);
  const MarkedCentralExtension& mce = rep.descended[0];
  CHECK(mce.ext.E->order() == 24);
  CHECK(mce.ext.n == 2);
  // unique element of order 2: SL(2, F3)
  int invs = 0;
  for (int x = 0; x < 24; ++x)
    if (mce.ext.E->order_of(x) == 2) ++invs;
  CHECK(invs == 1);
  CHECK(mce.description() == "extension order 24 kernel 2");

  // the marking residues: 3-cycle orbits trivial, order-2 orbit geometric
  auto res = residue_data_extension(mce, a4.d, a4.tcs);
  auto orbits = a4.tcs.orbits();
  for (size_t i = 0; i < orbits.size(); ++i) {
    int rep0 = a4.tcs.classes.rep(orbits[i][0]);
    if (orbits[i][0] == a4.tcs.identity_class) continue;
    if (a4.G->order_of(rep0) == 3)
      CHECK(res[i].kind == ResidueKind::Trivial);
    else
      CHECK(res[i].kind == ResidueKind::GeometricallyNontrivial);
  }

  // with the order-2 class in the support the descent must fail: total trivial
  BrauerReport repall = brauer_report(a4.d, a4.tcs, a4.full);
  CHECK(repall.total.order() == 1);
}

TEST_CASE("descent is stable under relabeling") {
  // relabel SL(2,F3)'s elements randomly and re-run the marking search
  Ctx a4("A4");
  auto sup3 = three_cycle_support(a4);
  GeometricBrauer g3 = geometric_brauer(a4.d, a4.tcs, sup3);
  TwoCocycle f = g3.invariant_gen_cocycle(0, *a4.G);
  // reduce to modulus 2 via the report path: take the descended certificate
  BrauerReport rep = brauer_report(a4.d, a4.tcs, sup3);
  const CentralExtension& ext = rep.descended[0].ext;
  std::mt19937 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<int> perm(ext.E->order());
    for (int i = 0; i < (int)perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    // rebuild an isomorphic extension through the relabeling
    std::vector<int> inv(perm.size());
    for (int i = 0; i < (int)perm.size(); ++i) inv[perm[i]] = i;
    std::vector<int> table(perm.size() * perm.size());
    for (size_t a = 0; a < perm.size(); ++a)
      for (size_t b = 0; b < perm.size(); ++b)
        table[a * perm.size() + b] = perm[ext.E->mul(inv[a], inv[b])];
    CentralExtension ext2;
    ext2.E = std::make_shared<FiniteGroup>(
        FiniteGroup::from_cayley(std::move(table), (int)perm.size()));
    ext2.n = ext.n;
    ext2.kernel_gen = perm[ext.kernel_gen];
    for (int x : ext.kernel) ext2.kernel.push_back(perm[x]);
    ext2.proj.resize(perm.size());
    for (size_t x = 0; x < perm.size(); ++x) ext2.proj[perm[x]] = ext.proj[x];
    auto found = marking_descent_search(ext2, a4.d, a4.tcs, sup3);
    CHECK(found.has_value());
  }
  (void)f;
}

TEST_CASE("brauer reports for the paper examples") {
  // A4 conductor support: Z/2 generated by the degree-24 kernel-2 extension
  Ctx a4("A4");
  BrauerReport ra = brauer_report(a4.d, a4.tcs, three_cycle_support(a4));
  CHECK(ra.exact);
  CHECK(ra.total.order() == 2);
  CHECK(ra.algebraic.group.trivial());
  REQUIRE(ra.generators.size() == 1);
  CHECK(ra.generators[0].description == "extension order 24 kernel 2");

  // S_n disc support (transpositions): trivial for n = 3, 4
  for (const auto& name : {"S3", "S4"}) {
    Ctx s(name);
    std::vector<int> sup;
    for (int c : s.full) {
      const Perm& p = s.G->perm(s.tcs.classes.rep(c));
      if (p.degree() - p.num_orbits() == 1) sup.push_back(c);
    }
    BrauerReport r = brauer_report(s.d, s.tcs, sup);
    CHECK(r.exact);
    CHECK(r.total.order() == 1);
  }

  // D4 conductor support: trivial
  Ctx d4("D4");
  std::vector<int> csup{d4.cls("(1,3)"), d4.cls("(1,2)(3,4)")};
  std::sort(csup.begin(), csup.end());
  BrauerReport rd = brauer_report(d4.d, d4.tcs, csup);
  CHECK(rd.exact);
  CHECK(rd.total.order() == 1);

  // A4 radical (full support): trivial unramified Brauer group
  BrauerReport run = brauer_report(a4.d, a4.tcs, a4.full);
  CHECK(run.total.order() == 1);

  // Z/4 with weights (1,2,1): order 2 (algebraic), support = minimal classes
  Ctx c4("C4");
  std::vector<int> c4sup{c4.cls("(1,2,3,4)"), c4.cls("(1,4,3,2)")};
  std::sort(c4sup.begin(), c4sup.end());
  BrauerReport rc = brauer_report(c4.d, c4.tcs, c4sup);
  CHECK(rc.total.order() == 2);
  CHECK(rc.algebraic.group.order() == 2);
  // full unramified support for Z/4: no Grunwald-Wang obstruction at 4
  CHECK(brauer_report(c4.d, c4.tcs, c4.full).total.order() == 1);

  // Z/8 unramified: order 2 (Grunwald-Wang)
  Ctx c8("C8");
  BrauerReport r8 = brauer_report(c8.d, c8.tcs, c8.full);
  CHECK(r8.total.order() == 2);
}

TEST_CASE("brauer product rule on C2 x C2") {
  Ctx v4("V4");
  // support = the two classes generating the factors
  std::vector<int> sup{v4.cls("(1,2)(3,4)"), v4.cls("(1,3)(2,4)")};
  std::sort(sup.begin(), sup.end());
  BrauerReport r = brauer_report(v4.d, v4.tcs, sup);
  // each C2 factor has trivial Br; the product must be trivial too
  Ctx c2("C2");
  BrauerReport rf = brauer_report(c2.d, c2.tcs, c2.full);
  CHECK(r.total.order() == rf.total.order() * rf.total.order());

  // and S3 x C2 = D6 with the product support: factors S3 (trivial) and C2
  Ctx d6("D6");
  // the two classes: reflections through vertices project to S3 transpositions
  // use disc-minimal classes of the two factors: (2,6)(3,5)-type and the
  // central rotation r^3 = (1,4)(2,5)(3,6)
  std::vector<int> dsup;
  dsup.push_back(d6.cls("(1,4)(2,5)(3,6)")); // generates the C2 factor
  dsup.push_back(d6.cls("(2,6)(3,5)"));      // reflection: S3 factor transpositions
  dsup.push_back(d6.cls("(1,3,5)(2,4,6)"));  // rotation of order 3 completes S3
  std::sort(dsup.begin(), dsup.end());
  BrauerReport rd6 = brauer_report(d6.d, d6.tcs, dsup);
  CHECK(rd6.total.order() == 1);
}

TEST_CASE("support must generate") {
  Ctx a4("A4");
  std::vector<int> sup{a4.cls("(1,2)(3,4)")};
  CHECK_THROWS_WITH_AS(brauer_report(a4.d, a4.tcs, sup), doctest::Contains("generate"),
                       std::runtime_error);
}

TEST_CASE("sylow-route reports for S5 and S6 disc") {
  for (const auto& name : {"S5", "S6"}) {
    Ctx s(name);
    std::vector<int> sup;
    for (int c : s.full) {
      const Perm& p = s.G->perm(s.tcs.classes.rep(c));
      if (p.degree() - p.num_orbits() == 1) sup.push_back(c);
    }
    BrauerReport r = brauer_report(s.d, s.tcs, sup);
    CHECK(r.geometric.via_sylow);
    CHECK(r.exact);
    CHECK(r.total.order() == 1);
  }
}
