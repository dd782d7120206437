#pragma once

#include <map>
#include <memory>
#include <vector>

#include "malle/group.hpp"

namespace malle {

struct ArchPlace {
  bool real = true;
  int conj_elem = 0; // index in gamma of complex conjugation (real places)
};

// Base-field datum: finite quotient Gamma acting on G, cyclotomic character
// into (Z/eZ)^x with e = exp(G), Frobenius lookup mod a conductor, and
// archimedean places.
struct GaloisDatum {
  std::shared_ptr<FiniteGroup> G;
  std::shared_ptr<FiniteGroup> gamma;
  std::vector<std::vector<int>> action; // per gamma element: permutation of G indices
  std::vector<long long> cyc;           // per gamma element: unit mod exp(G)
  long long conductor = 1;
  std::vector<int> frob_table; // residue mod conductor -> gamma index (-1 if not coprime)
  std::vector<ArchPlace> arch;

  int act(int sigma, int g) const { return action[sigma][g]; }
  // anticyclotomic action on elements: sigma . g = action(sigma)(g)^(cyc(sigma)^-1)
  int twisted_act(int sigma, int g) const;
  int frobenius(long long p) const; // throws on bad place (p | conductor)
  bool is_good_prime(long long p) const;
  void validate() const;
};

GaloisDatum constant_datum_over_Q(std::shared_ptr<FiniteGroup> G);

// Builds a datum from generator data (explicit mode): gamma with chosen
// generator indices, automorphism images per generator, cyc per generator.
GaloisDatum explicit_datum(std::shared_ptr<FiniteGroup> G, std::shared_ptr<FiniteGroup> gamma,
                           const std::vector<int>& gamma_gens,
                           const std::vector<std::vector<int>>& gen_action,
                           const std::vector<long long>& gen_cyc, long long conductor,
                           const std::vector<int>& frob_table, std::vector<ArchPlace> arch);

struct TwistedClassSet {
  ClassPartition classes;
  std::vector<std::vector<int>> gamma_action; // per gamma element: permutation of class indices
  int identity_class = 0;

  int count() const { return classes.count(); }
  std::vector<std::vector<int>> orbits() const;       // Gamma-orbits of class indices
  std::vector<int> orbit_of(int cls) const;
  std::vector<int> stabilizer(int cls) const;         // gamma indices fixing the class
  int nontrivial_orbit_count() const;
};

TwistedClassSet twisted_classes(const GaloisDatum& datum);

std::vector<int> frobenius_fixed_classes(const TwistedClassSet& tcs, const GaloisDatum& datum,
                                         long long p);

// Galois action on 1-dim characters: (sigma.chi)(g) = cyc(sigma) * chi(action(sigma)^-1 g).
Character char_galois_act(const GaloisDatum& datum, int sigma, const Character& chi);

struct RationalCharacterGroup {
  std::vector<Character> chars; // trivial first
  int order() const { return (int)chars.size(); }
};

RationalCharacterGroup rational_characters(const GaloisDatum& datum);

// Datum on a subgroup M twisted through a lift of a quotient cocycle:
// sigma . m = lift(sigma) * action(sigma)(m) * lift(sigma)^-1.
// lift is given on gamma generators; consistency on relations is verified.
GaloisDatum inner_twist_datum(const FiniteGroup::Subgroup& M,
                              const std::vector<int>& gamma_gens,
                              const std::vector<int>& lift, const GaloisDatum& datum);

long long inverse_mod(long long a, long long m);

} // namespace malle
