#include "malle/picorb.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace malle {

bool OrbifoldLineBundle::is_big(const TwistedClassSet& tcs) const {
  if (!full_support) return false;
  for (int c = 0; c < tcs.count(); ++c) {
    if (c == tcs.identity_class) continue;
    if (weight.value[c] <= 0) return false;
  }
  return true;
}

Rat age(const Character& chi, const ClassPartition& classes, int cls) {
  return chi.val[classes.rep(cls)];
}

WeightFunction builtin_weight(HeightKind kind, const GaloisDatum& datum,
                              const std::map<int, Rat>& artin_class_values) {
  const FiniteGroup& G = *datum.G;
  const ClassPartition& cp = G.classes();
  WeightFunction w;
  w.value.assign(cp.count(), Rat(0));
  switch (kind) {
    case HeightKind::Disc: {
      if (!G.has_perms())
        throw std::runtime_error("disc weight requires a permutation presentation");
      for (int c = 0; c < cp.count(); ++c) {
        const Perm& p = G.perm(cp.rep(c));
        w.value[c] = Rat(p.degree() - p.num_orbits());
      }
      break;
    }
    case HeightKind::Radical: {
      for (int c = 0; c < cp.count(); ++c)
        if (c != cp.identity_class) w.value[c] = Rat(1);
      break;
    }
    case HeightKind::Artin: {
      // psi given per class; w(c) = psi(1) - average of psi over <rep(c)>
      auto psi_of = [&](int elt) -> Rat {
        auto it = artin_class_values.find(cp.class_of[elt]);
        if (it == artin_class_values.end())
          throw std::runtime_error("artin class function missing class of " + G.element_name(elt));
        return it->second;
      };
      Rat psi1 = psi_of(G.id());
      for (int c = 0; c < cp.count(); ++c) {
        int g = cp.rep(c);
        int m = G.order_of(g);
        Rat sum(0);
        int x = G.id();
        for (int k = 0; k < m; ++k) {
          sum += psi_of(x);
          x = G.mul(x, g);
        }
        w.value[c] = psi1 - sum / Rat(m);
      }
      break;
    }
    case HeightKind::Explicit:
      throw std::runtime_error("explicit weights are supplied directly");
  }
  return w;
}

OrbifoldLineBundle validate_bundle(const Character& chi, const WeightFunction& w,
                                   const TwistedClassSet& tcs, const GaloisDatum& datum,
                                   const std::vector<int>& support) {
  const FiniteGroup& G = *datum.G;
  if ((int)w.value.size() != tcs.count()) throw std::runtime_error("weight vector length mismatch");
  if (w.value[tcs.identity_class] != 0) throw std::runtime_error("weight must vanish at the identity class");
  for (int s = 0; s < datum.gamma->order(); ++s)
    for (int c : support)
      if (w.value[tcs.gamma_action[s][c]] != w.value[c])
        throw std::runtime_error("weight is not Galois-equivariant at class " +
                                 G.element_name(tcs.classes.rep(c)));
  for (int c : support) {
    Rat a = age(chi, tcs.classes, c);
    if (mod1(w.value[c]) != a)
      throw std::runtime_error("age mismatch at class " + G.element_name(tcs.classes.rep(c)) +
                               ": expected age " + rat_str(a) + ", weight gives residue " +
                               rat_str(mod1(w.value[c])));
  }
  OrbifoldLineBundle L;
  L.chi = chi;
  L.weight = w;
  L.support = support;
  std::sort(L.support.begin(), L.support.end());
  std::vector<int> full;
  for (int c = 0; c < tcs.count(); ++c)
    if (c != tcs.identity_class) full.push_back(c);
  L.full_support = (L.support == full);
  return L;
}

std::vector<Character> matching_characters(const CharacterGroup& all, const ClassPartition& classes,
                                           const std::vector<int>& support,
                                           const std::vector<Rat>& w) {
  std::vector<Character> out;
  for (const auto& chi : all.all) {
    bool ok = true;
    for (size_t i = 0; i < support.size() && ok; ++i)
      if (chi.val[classes.rep(support[i])] != mod1(w[i])) ok = false;
    if (ok) out.push_back(chi);
  }
  return out;
}

namespace {

bool weight_is_zhat_invariant(const WeightFunction& w, const GaloisDatum& datum,
                              const TwistedClassSet& tcs) {
  const FiniteGroup& G = *datum.G;
  long long e = G.exponent();
  for (long long u = 1; u < e || (e == 1 && u == 1); ++u) {
    if (std::gcd(u, e) != 1) continue;
    for (int c = 0; c < tcs.count(); ++c) {
      int img = tcs.classes.class_of[G.pow(tcs.classes.rep(c), u)];
      if (w.value[img] != w.value[c]) return false;
    }
    if (e == 1) break;
  }
  return true;
}

} // namespace

FujitaReport fujita(const OrbifoldLineBundle& L, const TwistedClassSet& tcs,
                    const GaloisDatum& datum) {
  const FiniteGroup& G = *datum.G;
  if (!L.is_big(tcs)) throw std::runtime_error("fujita invariants need a big orbifold line bundle");
  FujitaReport fr;
  if (tcs.count() <= 1)
    throw std::runtime_error("fujita invariants need a nontrivial group");
  Rat minw;
  bool first = true;
  for (int c = 0; c < tcs.count(); ++c) {
    if (c == tcs.identity_class) continue;
    if (first || L.weight.value[c] < minw) {
      minw = L.weight.value[c];
      first = false;
    }
  }
  fr.a = 1 / minw;
  for (int c = 0; c < tcs.count(); ++c)
    if (c != tcs.identity_class && L.weight.value[c] == minw) fr.minimal_classes.push_back(c);

  // b = number of Gamma-orbits of minimal classes
  std::vector<char> seen(tcs.count(), 0);
  fr.b = 0;
  for (int c : fr.minimal_classes) {
    if (seen[c]) continue;
    ++fr.b;
    for (int x : tcs.orbit_of(c)) seen[x] = 1;
  }

  std::vector<int> gens;
  for (int c : fr.minimal_classes)
    for (int x : tcs.classes.classes[c]) gens.push_back(x);
  fr.iitaka_kernel = G.subgroup_generated(gens);
  if (!G.is_normal(fr.iitaka_kernel.to_parent))
    throw std::runtime_error("subgroup generated by classes must be normal");
  fr.balanced = fr.iitaka_kernel.order() == G.order();
  auto q = G.quotient(fr.iitaka_kernel);
  fr.iitaka_group = q.group;
  fr.iitaka_proj = q.proj;
  fr.kappa = fr.iitaka_group->order() - 1;
  fr.identification_dependent = !weight_is_zhat_invariant(L.weight, datum, tcs);
  return fr;
}

EffectiveCone effective_cone_constant(const FujitaReport& fr, int rational_char_order) {
  if (!fr.balanced) throw std::runtime_error("effective cone constant needs a balanced bundle");
  EffectiveCone ec;
  ec.alpha_star = rat_pow(fr.a, fr.b) / Rat(rational_char_order);
  ec.a_pow_b_minus_1_over_chars = rat_pow(fr.a, fr.b - 1) / Rat(rational_char_order);
  return ec;
}

PicorbLattice picorb_lattice(const GaloisDatum& datum, const TwistedClassSet& tcs,
                             const std::vector<int>& support) {
  const FiniteGroup& G = *datum.G;
  long long e = G.exponent();
  int r = (int)support.size();
  CharacterGroup chars = G.one_dim_characters();

  // integer columns at scale den = e: standard basis and age lifts
  Int den = make_int(e);
  IntMat M(r, r + (int)chars.all.size());
  std::vector<Character> colchi(r + chars.all.size());
  Character triv;
  triv.val.assign(G.order(), Rat(0));
  for (int i = 0; i < r; ++i) {
    M.at(i, i) = den;
    colchi[i] = triv;
  }
  for (size_t j = 0; j < chars.all.size(); ++j) {
    for (int i = 0; i < r; ++i) {
      Rat a = age(chars.all[j], tcs.classes, support[i]) * Rat(den);
      if (!is_integer(a)) throw std::runtime_error("age denominator exceeds exponent");
      M.at(i, r + (int)j) = a.get_num();
    }
    colchi[r + j] = chars.all[j];
  }

  SnfResult s = snf(M);
  if (s.rank != r) throw std::runtime_error("picorb lattice must have full rank");
  PicorbLattice lat;
  lat.support = support;
  lat.den = den;
  lat.basis = IntMat(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) lat.basis.at(i, j) = s.diag[j] * s.Uinv.at(i, j);
  // character part: basis_j = M * (V col j); characters add pointwise in Q/Z
  for (int j = 0; j < r; ++j) {
    Character chi = triv;
    for (int cidx = 0; cidx < M.cols; ++cidx) {
      Int coeff = s.V.at(cidx, j);
      if (coeff == 0) continue;
      long long cc = to_long(coeff);
      for (int g = 0; g < G.order(); ++g)
        chi.val[g] = mod1(chi.val[g] + make_rat(cc) * colchi[cidx].val[g]);
    }
    lat.basis_chi.push_back(chi);
  }

  // gamma matrices: columns permuted by sigma acting on support classes
  std::vector<int> pos(tcs.count(), -1);
  for (int i = 0; i < r; ++i) pos[support[i]] = i;
  // B^-1 = diag(1/d) * U (from SNF: basis = Uinv * diag(d))
  for (int sidx = 0; sidx < datum.gamma->order(); ++sidx) {
    IntMat PB(r, r); // P_sigma * basis
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < r; ++i) {
        // (sigma w)(c) = w(sigma^-1 c): row c of result = row sigma^-1 c of input
        int c = support[i];
        int pre = tcs.gamma_action[datum.gamma->inv(sidx)][c];
        if (pos[pre] < 0) throw std::runtime_error("support is not Galois stable");
        PB.at(i, j) = lat.basis.at(pos[pre], j);
      }
    IntMat Mmat(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        Int num(0);
        for (int k = 0; k < r; ++k) num += s.U.at(i, k) * PB.at(k, j);
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), s.diag[i].get_mpz_t());
        if (rem != 0) throw std::runtime_error("gamma action does not preserve the lattice");
        Mmat.at(i, j) = q;
      }
    lat.gamma_mats.push_back(std::move(Mmat));
  }
  return lat;
}

Int PicorbLattice::standard_index() const {
  // [L : Hom(support, Z)] = den^r / |det basis|
  Int det(1);
  // basis = Uinv * diag(d): |det| = prod d (Uinv unimodular)
  // recompute via SNF to stay independent of construction details
  SnfResult s = snf(basis);
  for (int i = 0; i < basis.cols; ++i) det *= s.diag[i];
  Int denr(1);
  for (int i = 0; i < basis.cols; ++i) denr *= den;
  if (denr % det != 0) throw std::runtime_error("index computation bug");
  return denr / det;
}

WeightFunction restrict_weight(const WeightFunction& w, const TwistedClassSet& tcs_g,
                               const FiniteGroup& G, const FiniteGroup::Subgroup& M,
                               const TwistedClassSet& tcs_m) {
  WeightFunction out;
  out.value.assign(tcs_m.count(), Rat(0));
  for (int c = 0; c < tcs_m.count(); ++c) {
    int rep = M.to_parent[tcs_m.classes.rep(c)];
    out.value[c] = w.value[tcs_g.classes.class_of[rep]];
  }
  (void)G;
  return out;
}

} // namespace malle
