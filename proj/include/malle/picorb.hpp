#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "malle/galois.hpp"
#include "malle/group.hpp"
#include "malle/intmat.hpp"

namespace malle {

// Weight function on twisted conjugacy classes; zero at the identity class.
struct WeightFunction {
  std::vector<Rat> value; // per class index
  Rat operator()(int cls) const { return value[cls]; }
};

struct OrbifoldLineBundle {
  Character chi;            // character over k (or k-bar for geometric bundles)
  WeightFunction weight;
  std::vector<int> support; // class indices, identity excluded, sorted
  bool full_support = true;

  bool is_big(const TwistedClassSet& tcs) const;
};

enum class HeightKind { Disc, Radical, Artin, Explicit };

// disc: ind(g) = degree - #orbits; radical: constant 1; artin: psi(1) minus
// the average of psi over <g>.
WeightFunction builtin_weight(HeightKind kind, const GaloisDatum& datum,
                              const std::map<int, Rat>& artin_class_values = {});

// Checks w(e) = 0, Gamma-equivariance, and the age compatibility
// w(c) = age(chi, c) mod Z on the support; throws with the offending class.
OrbifoldLineBundle validate_bundle(const Character& chi, const WeightFunction& w,
                                   const TwistedClassSet& tcs, const GaloisDatum& datum,
                                   const std::vector<int>& support);

Rat age(const Character& chi, const ClassPartition& classes, int cls);

// Characters chi (over k-bar) with age(chi, .) = w mod Z on the given support.
std::vector<Character> matching_characters(const CharacterGroup& all, const ClassPartition& classes,
                                           const std::vector<int>& support,
                                           const std::vector<Rat>& w);

struct FujitaReport {
  Rat a;
  std::vector<int> minimal_classes; // class indices
  int b = 0;
  bool balanced = false;
  FiniteGroup::Subgroup iitaka_kernel; // <M(L)>
  std::shared_ptr<FiniteGroup> iitaka_group;
  std::vector<int> iitaka_proj;
  long long kappa = 0;
  bool identification_dependent = false; // weight not Z-hat-x invariant
};

FujitaReport fujita(const OrbifoldLineBundle& L, const TwistedClassSet& tcs,
                    const GaloisDatum& datum);

// alpha* = a^b / #dual G(k), plus the a^(b-1) variant used by the leading
// constant.
struct EffectiveCone {
  Rat alpha_star;
  Rat a_pow_b_minus_1_over_chars;
};

EffectiveCone effective_cone_constant(const FujitaReport& fr, int rational_char_order);

// Partial orbifold Picard lattice over k-bar with its Gamma-action:
// spanned by Hom(support, Z) together with one age-lift per character.
struct PicorbLattice {
  std::vector<int> support;   // class indices
  IntMat basis;               // r x r integer matrix; column j / den = basis vector
  Int den;
  std::vector<Character> basis_chi; // character part of each basis vector
  std::vector<IntMat> gamma_mats;   // per gamma element, action in basis coordinates
  int rank() const { return basis.cols; }
  // index of Hom(support, Z) inside the lattice (equals |age-image of dual G|)
  Int standard_index() const;
};

PicorbLattice picorb_lattice(const GaloisDatum& datum, const TwistedClassSet& tcs,
                             const std::vector<int>& support);

// Restriction of a weight function to a subgroup (classes of the subgroup get
// the weight of their ambient class).
WeightFunction restrict_weight(const WeightFunction& w, const TwistedClassSet& tcs_g,
                               const FiniteGroup& G, const FiniteGroup::Subgroup& M,
                               const TwistedClassSet& tcs_m);

} // namespace malle
