#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "malle/tamagawa.hpp"

namespace malle {

std::vector<long long> primes_up_to(long long P);

struct EulerProductSpec {
  Rat prefactor = Rat(1);
  // per-prime factor; nullopt = skip (bad place, flagged)
  std::function<std::optional<Rat>(long long)> factor;
};

struct EulerProductResult {
  double value = 0;
  double tail_product = 1;  // product without the prefactor
  double last_factor = 1;
  long long P = 0;
  int factors = 0;
  int skipped = 0;
};

// Ordered product over primes <= P in fixed blocks; bit-identical for any
// thread count.
EulerProductResult euler_product(const EulerProductSpec& spec, long long P, int threads = 1);

struct ConstantPiece {
  std::string element;
  std::string slice; // arch point label or "total"
  Rat prefactor;
  std::vector<std::pair<std::string, Rat>> parts;
  double tail = 1;
  double contribution = 0;
  double last_factor = 1;
};

struct LeadingConstantReport {
  Rat a;
  int b = 1;
  bool balanced = true;
  Rat alpha_star;
  Rat a_b1_over_chars;
  long long P = 0;
  ConvergenceMode mode = ConvergenceMode::Zeta;
  bool naive = false;
  std::vector<ConstantPiece> pieces;
  std::map<std::string, double> constant_by_slice; // includes "total"
  double error_indicator = 0;
  std::optional<Rat> groupoid_factor; // |N| / (|C| |G|) when an embedding exists
  bool identification_dependent = false;
};

LeadingConstantReport leading_constant(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                       const OrbifoldLineBundle& L, const FujitaReport& fr,
                                       const HeightSpec& hs, const BrauerReport& br, long long P,
                                       ConvergenceMode mode = ConvergenceMode::Zeta,
                                       int threads = 1, bool naive = false);

// One local condition: either an archimedean point label or a finite-place
// ramification type (class index; -1 = unramified).
struct LocalCondition {
  bool archimedean = true;
  int place = 0;    // arch place index
  std::string label; // arch point label
  long long p = 0;  // finite place
  int cls = -1;     // ramification class (-1 = unramified)
};

// Predicted conditional proportion (and the Brauer-free Malle-Bhargava value
// when naive = true).
double local_probability(const GaloisDatum& datum, const TwistedClassSet& tcs,
                         const OrbifoldLineBundle& L, const FujitaReport& fr, const HeightSpec& hs,
                         const BrauerReport& br, const std::vector<LocalCondition>& conds,
                         long long P, bool naive = false);

struct UnbalancedReport {
  FiniteGroup::Subgroup M;
  std::shared_ptr<FiniteGroup> iitaka_group;
  Rat fiber_weight; // 1 / |(G/M)(k)|
  int base_b = 1;
  std::optional<GaloisDatum> fiber_datum;
  std::optional<TwistedClassSet> fiber_tcs;
  std::optional<OrbifoldLineBundle> fiber_bundle;
  std::optional<FujitaReport> fiber_fujita;
  bool breaking_fiber = false;
};

UnbalancedReport unbalanced_report(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                   const OrbifoldLineBundle& L, const FujitaReport& fr,
                                   const std::vector<int>& lift_gamma_gens = {},
                                   const std::vector<int>& lift_values = {});

// groupoid correction |N_{S_n}(G)| / (|C_{S_n}(G)| * |G|) for a permutation
// group (Lemma-level bookkeeping for field counts).
Rat groupoid_factor_for_embedding(const FiniteGroup& G);

// L(1, chi) for a primitive real Dirichlet character given by a value table
// on residues mod f (+1/-1 on coprime residues).
double dirichlet_L1(const std::vector<int>& chi, long long f);

} // namespace malle
