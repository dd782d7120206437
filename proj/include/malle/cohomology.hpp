#pragma once

#include <optional>
#include <vector>

#include "malle/galois.hpp"
#include "malle/group.hpp"
#include "malle/intmat.hpp"

namespace malle {

// Normalized 2-cocycle with values in Z/n: f(e,.) = f(.,e) = 0 and
// f(g,h) + f(gh,k) = f(h,k) + f(g,hk).
struct TwoCocycle {
  long long n = 1;
  int order = 0;                // |G|
  std::vector<long long> table; // order*order, values in [0,n)

  long long at(int g, int h) const { return table[(size_t)g * order + h]; }
  long long& at(int g, int h) { return table[(size_t)g * order + h]; }
  static TwoCocycle zero(const FiniteGroup& G, long long n);
  bool verify(const FiniteGroup& G) const; // exhaustive identity + normalization
};

TwoCocycle cocycle_add(const TwoCocycle& a, const TwoCocycle& b);
TwoCocycle cocycle_scale(const TwoCocycle& a, long long k);

// H^2(G, Z/n) (trivial coefficients) via the normalized bar resolution,
// with coordinates for arbitrary cocycles. Optionally quotiented further by
// the Bockstein image (h2_qz), giving H^2(G, Q/Z) presented at modulus n.
struct CohomGroup {
  FinAbGroup group;
  long long n = 1;
  std::vector<TwoCocycle> basis;

  // internals for coordinates
  std::vector<int> nonid;     // non-identity elements in index order
  std::vector<int> pair_index; // |G|^2 -> variable index or -1
  KernelLattice lattice;
  QuotientZm pres;

  std::vector<Int> coords(const TwoCocycle& f) const;
  TwoCocycle from_coords(const std::vector<Int>& c, const FiniteGroup& G) const;
};

CohomGroup h2_trivial(const FiniteGroup& G, long long n, int size_cap = 48);

// Connecting map for 0 -> Z/n -> Q/Z -> Q/Z -> 0 applied to a character
// (values must be n-torsion).
TwoCocycle bockstein(const FiniteGroup& G, const Character& chi, long long n);

// H^2(G, Q/Z) presented at modulus n = |G| modulo Bockstein images.
CohomGroup h2_qz(const FiniteGroup& G, int size_cap = 48);

// Is the Q/Z-class of f trivial on the subgroup (element list)? This is the
// coboundary system over Z/n augmented with the subgroup's Bockstein classes,
// so that cyclic subgroups always pass.
bool restrict_test(const FiniteGroup& G, const TwoCocycle& f, const std::vector<int>& sub);

// Plain coboundary solvability over Z/n (no Bockstein slack).
bool restrict_test_plain(const FiniteGroup& G, const TwoCocycle& f, const std::vector<int>& sub);

// Galois action on H^2(G, Q/Z) classes: (sigma.f)(g,h) = cyc(sigma) *
// f(action(sigma)^-1 g, action(sigma)^-1 h).
TwoCocycle cocycle_galois_act(const GaloisDatum& datum, int sigma, const TwoCocycle& f);

// Crossed homomorphisms modulo principal ones: H^1(Gamma, M) for a lattice M
// with an integer Gamma-action given per Gamma element.
struct H1Result {
  FinAbGroup group;
  // generator k, gamma element s -> lattice vector (length r)
  std::vector<std::vector<std::vector<Int>>> cocycles;
};

H1Result h1_lattice(const FiniteGroup& gamma, const std::vector<IntMat>& mats);

// H^2(G, Q/Z) through Sylow restriction (Cartan-Eilenberg stable elements);
// exact at any order, used above the bar-resolution cap. Supports class
// restriction to p-subgroups conjugated into the Sylow subgroup.
struct SylowH2 {
  struct Part {
    long long p;
    std::vector<int> sylow;     // element list in G
    FiniteGroup::Subgroup sub;  // the Sylow subgroup
    CohomGroup h2;              // H^2(S, Q/Z)
    // stable subgroup of h2: generators as coordinate vectors over h2.group
    std::vector<std::vector<Int>> stable_gens;
    FinAbGroup stable_group;
  };
  std::vector<Part> parts;
  FinAbGroup group; // direct sum over parts

  int num_gens() const;
  // restriction of a generator combo to an abelian subgroup A of G:
  // trivial iff all p-parts restrict to coboundaries.
  bool combo_restricts_trivially(const FiniteGroup& G, const std::vector<Int>& combo,
                                 const std::vector<int>& A) const;
};

SylowH2 sylow_h2_qz(const FiniteGroup& G, int bar_cap = 48);

// Triviality of a cocycle class in H^2(A, Q/Z) (coboundary modulo Bockstein).
bool restrict_test_qz(const FiniteGroup& A, const TwoCocycle& z);

// H^2(A, Q/Z) presented at an arbitrary modulus n (multiple of |A|).
CohomGroup h2_qz_at_modulus(const FiniteGroup& A, long long n, int size_cap = 48);

} // namespace malle
