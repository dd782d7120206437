#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "malle/cohomology.hpp"
#include "malle/galois.hpp"
#include "malle/picorb.hpp"

namespace malle {

enum class ResidueKind { Trivial, AlgebraicCharacter, GeometricallyNontrivial };

// Residue of a Brauer class along one Galois orbit of conjugacy classes.
// Algebraic residues are emitted as Dirichlet characters: a modulus together
// with a value table on residues (values in Q/Z, nullopt where Frobenius does
// not stabilize the orbit, never queried for Frobenius-fixed classes).
struct ResidueDatum {
  ResidueKind kind = ResidueKind::Trivial;
  long long modulus = 1;
  std::vector<std::optional<Rat>> value; // indexed by residue mod modulus
  std::optional<Rat> at_prime(long long p) const;
  std::string str() const;
};

struct AlgebraicBrauer {
  FinAbGroup group;
  PicorbLattice lattice;
  // generator k: gamma element -> lattice coordinate vector
  std::vector<std::vector<std::vector<Int>>> cocycles;
};

AlgebraicBrauer algebraic_brauer(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                 const std::vector<int>& support);

struct GeometricBrauer {
  bool via_sylow = false;
  FinAbGroup full_h2;   // H^2(G, Q/Z)
  FinAbGroup cut;       // partially unramified subgroup (over k-bar)
  FinAbGroup invariant; // Gamma-invariant part of the cut
  std::optional<CohomGroup> h2;          // small path
  std::optional<SylowH2> sylow;          // big path
  std::vector<std::vector<Int>> cut_gens;        // coords over the respective basis
  std::vector<std::vector<Int>> invariant_gens;  // coords over the respective basis
  TwoCocycle invariant_gen_cocycle(int k, const FiniteGroup& G) const; // small path only
};

GeometricBrauer geometric_brauer(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                 const std::vector<int>& support, int bar_cap = 48);

struct CentralExtension {
  std::shared_ptr<FiniteGroup> E;
  std::vector<int> proj;   // E index -> G index
  long long n = 1;         // kernel order
  int kernel_gen = 0;      // index of (1, e)
  std::vector<int> kernel; // z^0 .. z^(n-1)
};

CentralExtension extension_from_cocycle(const FiniteGroup& G, const TwoCocycle& f);

// Marked central extension with a Galois action of the extended group
// gamma' = gamma x_{(Z/eG)^x} (Z/eE)^x.
struct MarkedCentralExtension {
  CentralExtension ext;
  GaloisDatum base;                 // the datum on G (gamma level)
  std::shared_ptr<FiniteGroup> gamma_ext;
  std::vector<int> gamma_ext_to_base;   // gamma' index -> gamma index
  std::vector<long long> cyc_ext;       // gamma' index -> unit mod exp(E)
  long long conductor_ext = 1;
  std::vector<int> frob_ext;            // residue -> gamma' index
  std::vector<std::vector<int>> action; // per gamma' element: automorphism of E
  std::vector<std::vector<int>> marking; // per support class: the chosen lift orbit
  std::string description() const;
};

std::optional<MarkedCentralExtension> marking_descent_search(const CentralExtension& ext,
                                                             const GaloisDatum& datum,
                                                             const TwistedClassSet& tcs,
                                                             const std::vector<int>& support);

// Residues per Gamma-orbit (orbits of the full class set, in canonical order).
std::vector<ResidueDatum> residue_data_algebraic(const AlgebraicBrauer& alg, int gen,
                                                 const GaloisDatum& datum,
                                                 const TwistedClassSet& tcs);
std::vector<ResidueDatum> residue_data_extension(const MarkedCentralExtension& mce,
                                                 const GaloisDatum& datum,
                                                 const TwistedClassSet& tcs);

struct BrauerGenerator {
  bool algebraic = true;
  int index = 0; // into algebraic.cocycles or descended
  long long order = 1;
  std::string description;
  std::vector<ResidueDatum> residues; // per orbit
};

struct BrauerReport {
  std::vector<int> support;
  std::vector<std::vector<int>> orbits; // Gamma-orbits of all classes
  AlgebraicBrauer algebraic;
  GeometricBrauer geometric;
  std::vector<MarkedCentralExtension> descended;
  std::vector<int> excluded_invariant_gens; // invariant gens with no Galois action
  bool exact = true;
  Int total_lo, total_hi;
  std::vector<BrauerGenerator> generators;
  FinAbGroup total; // when exact
};

BrauerReport brauer_report(const GaloisDatum& datum, const TwistedClassSet& tcs,
                           const std::vector<int>& support, int bar_cap = 48);

} // namespace malle
