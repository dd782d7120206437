#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "malle/brauer.hpp"
#include "malle/galois.hpp"
#include "malle/picorb.hpp"

namespace malle {

// Local density as a formal sum of coeff * q^{-exponent} (exponents rational);
// exact rational value available when every exponent is integral.
struct LocalDensity {
  long long q = 0;
  std::vector<std::pair<Rat, Rat>> terms; // (exponent, coefficient), exponent-sorted
  std::string provenance;                 // "formula" | "fixture" | "brute-force"

  void add(const Rat& exponent, const Rat& coeff);
  std::optional<Rat> exact() const;
  double value() const;
  bool same_terms(const LocalDensity& o) const;
};

// Mass formula at a good place: sum over Frobenius-fixed classes of
// q^{-w(c) a}.
LocalDensity good_local_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                const OrbifoldLineBundle& L, const Rat& a, long long q);

// 1 + #M(L)^{Frob} / q.
LocalDensity integral_partial_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                      const std::vector<int>& minimal_classes, long long q);

// Real-place cocycles grouped into local points.
struct RealPoint {
  std::string label;
  int rep;                  // representative cocycle (group element)
  std::vector<int> members; // all cocycles in the class
};

std::vector<RealPoint> real_points(const GaloisDatum& datum, int place);

struct ArchDensity {
  Rat total;
  std::vector<std::pair<std::string, Rat>> per_point;
};

// (1/|G|) sum over real cocycles of H^{-a}; 1/(|G| H(e)^a) at complex places.
ArchDensity archimedean_density(const GaloisDatum& datum, int place, const Rat& a,
                                const std::map<std::string, Rat>& arch_heights);

// Twisted density: sum of chi_v(c) q^{-w(c) a} with chi_v from residue data
// (0 on geometrically nontrivial orbits, exact +-1 for quadratic characters).
LocalDensity twisted_local_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                   const OrbifoldLineBundle& L, const Rat& a,
                                   const std::vector<ResidueDatum>& residues,
                                   const std::vector<std::vector<int>>& orbits, long long q);

enum class ConvergenceMode { Zeta, Artin };

// zeta: (1 - 1/q)^b; artin: det(1 - q^{-1} P) on the minimal classes.
Rat convergence_factor(const GaloisDatum& datum, const TwistedClassSet& tcs,
                       const std::vector<int>& minimal_classes, int b, ConvergenceMode mode,
                       long long q);

// Independent oracle: weighted count of pairs (gamma, g) with
// g . (Frob * gamma) . g^-1 = gamma, each weighted q^{-w a} / |G|.
LocalDensity brute_force_local(const GaloisDatum& datum, const TwistedClassSet& tcs,
                               const OrbifoldLineBundle& L, const Rat& a, long long q);

// Local quadratic Hilbert symbol, additively in (1/2)Z/Z. v = 0 means the
// real place.
Rat hilbert_symbol(const Rat& a, const Rat& b, long long v);

// Archimedean twisted factor for a marked-central-extension generator:
// per real point, e^{2 pi i inv} H^{-a} summed over cocycles (inv = 0 iff the
// cocycle lifts to E).
ArchDensity archimedean_twisted(const GaloisDatum& datum, int place, const Rat& a,
                                const std::map<std::string, Rat>& arch_heights,
                                const MarkedCentralExtension& mce);

// Local invariant of a generator at each real cocycle of the place, in Q/Z.
// Extension generators use the lifting criterion; algebraic generators use
// the cyclic cup product (value of the character part of F(conj) at the
// cocycle).
std::vector<Rat> arch_phases(const GaloisDatum& datum, int place,
                             const MarkedCentralExtension& mce);
std::vector<Rat> arch_phases_algebraic(const GaloisDatum& datum, int place,
                                       const AlgebraicBrauer& alg, int gen);

// Combines per-cocycle phases into the twisted density of the place.
ArchDensity archimedean_from_phases(const GaloisDatum& datum, int place, const Rat& a,
                                    const std::map<std::string, Rat>& arch_heights,
                                    const std::vector<Rat>& phases);

struct BadPlaceData {
  Rat plain;
  std::vector<Rat> twisted; // per report generator
};

struct HeightSpec {
  std::map<long long, BadPlaceData> bad_places;
  std::map<std::string, Rat> arch_heights; // by real-point label, default 1
};

} // namespace malle
