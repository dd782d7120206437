#include "malle/brauer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace malle {

std::optional<Rat> ResidueDatum::at_prime(long long p) const {
  if (kind == ResidueKind::Trivial) return Rat(0);
  if (kind == ResidueKind::GeometricallyNontrivial) return std::nullopt;
  long long r = p % modulus;
  if (r < 0) r += modulus;
  return value[r];
}

std::string ResidueDatum::str() const {
  switch (kind) {
    case ResidueKind::Trivial:
      return "trivial";
    case ResidueKind::GeometricallyNontrivial:
      return "geometrically nontrivial";
    case ResidueKind::AlgebraicCharacter: {
      std::string s = "character mod " + std::to_string(modulus) + ":";
      for (long long r = 0; r < modulus; ++r)
        if (value[r]) s += " " + std::to_string(r) + "->" + rat_str(*value[r]);
      return s;
    }
  }
  return "?";
}

AlgebraicBrauer algebraic_brauer(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                 const std::vector<int>& support) {
  AlgebraicBrauer out;
  out.lattice = picorb_lattice(datum, tcs, support);
  H1Result h1 = h1_lattice(*datum.gamma, out.lattice.gamma_mats);
  out.group = h1.group;
  out.cocycles = h1.cocycles;
  return out;
}

namespace {

// subgroup of a finite abelian group presented by moduli d_i, spanned by the
// given coordinate vectors
struct SpanResult {
  FinAbGroup group;
  std::vector<std::vector<Int>> gens; // coordinate vectors
};

SpanResult finab_span(const std::vector<std::vector<Int>>& vecs, const std::vector<Int>& moduli) {
  SpanResult out;
  int t = (int)vecs.size();
  int m = (int)moduli.size();
  if (t == 0 || m == 0) return out;
  Int L(1);
  for (const auto& d : moduli) L = lcm(L, d);
  std::vector<SparseRow> rows(m);
  for (int i = 0; i < m; ++i) {
    Int sc = L / moduli[i];
    for (int j = 0; j < t; ++j) {
      Int v = vecs[j][i] * sc % L;
      if (v != 0) rows[i].entries.push_back({j, to_long(v)});
    }
  }
  KernelLattice T = kernel_mod_lattice(rows, t, to_long(L));
  QuotientZm pres = quotient_presentation(T.basis, t);
  out.group = pres.group;
  for (size_t k = 0; k < pres.live.size(); ++k) {
    std::vector<Int> gen = pres.generator((int)k);
    std::vector<Int> combo(m, Int(0));
    for (int j = 0; j < t; ++j)
      for (int i = 0; i < m; ++i) combo[i] += gen[j] * vecs[j][i];
    for (int i = 0; i < m; ++i) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), combo[i].get_mpz_t(), moduli[i].get_mpz_t());
      combo[i] = r;
    }
    out.gens.push_back(std::move(combo));
  }
  return out;
}

// solution subgroup {x : rows . x = 0} inside ⊕ Z/moduli
SpanResult finab_cut(const std::vector<Int>& moduli,
                     const std::vector<std::pair<std::vector<Int>, Int>>& conds) {
  int k = (int)moduli.size();
  SpanResult out;
  if (k == 0) return out;
  Int L(1);
  for (const auto& d : moduli) L = lcm(L, d);
  for (const auto& c : conds) L = lcm(L, c.second);
  std::vector<SparseRow> rows;
  for (const auto& c : conds) {
    SparseRow row;
    Int sc = L / c.second;
    for (int i = 0; i < k; ++i) {
      Int v = c.first[i] * sc % L;
      if (v != 0) row.entries.push_back({i, to_long(v)});
    }
    rows.push_back(row);
  }
  // x_i defined mod d_i: include d_i e_i among the spanning set
  KernelLattice sol = kernel_mod_lattice(rows, k, to_long(L));
  std::vector<std::vector<Int>> span;
  for (int j = 0; j < k; ++j) {
    std::vector<Int> col(k);
    for (int i = 0; i < k; ++i) col[i] = sol.basis.at(i, j);
    span.push_back(col);
  }
  return finab_span(span, moduli);
}

// all (conjugacy-deduped) noncyclic bicyclic condition subgroups <gamma, h>
std::vector<std::vector<int>> bicyclic_conditions(const FiniteGroup& G, const ClassPartition& cp,
                                                  const std::vector<int>& support) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (int c : support) {
    int g = cp.rep(c);
    for (int h : G.centralizer(g)) {
      auto A = G.subgroup_generated({g, h});
      bool cyclic = false;
      for (int x : A.to_parent)
        if (G.order_of(x) == A.order()) {
          cyclic = true;
          break;
        }
      if (cyclic) continue;
      if (seen.insert(A.to_parent).second) out.push_back(A.to_parent);
    }
  }
  return out;
}

} // namespace

GeometricBrauer geometric_brauer(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                 const std::vector<int>& support, int bar_cap) {
  const FiniteGroup& G = *datum.G;
  GeometricBrauer out;
  if (G.order() <= bar_cap) {
    out.h2 = h2_qz(G, bar_cap);
    const CohomGroup& h2 = *out.h2;
    out.full_h2 = h2.group;
    int k = (int)h2.basis.size();
    if (k == 0) return out;
    std::vector<Int> moduli = h2.group.factors;

    std::vector<std::pair<std::vector<Int>, Int>> conds;
    for (const auto& A : bicyclic_conditions(G, tcs.classes, support)) {
      auto S = G.subgroup_from_elements(A);
      CohomGroup h2A = h2_qz_at_modulus(*S.group, h2.n, bar_cap);
      if (h2A.basis.empty()) continue;
      std::vector<std::vector<Int>> theta(k);
      for (int i = 0; i < k; ++i) {
        TwoCocycle z = TwoCocycle::zero(*S.group, h2.n);
        for (int a = 0; a < S.group->order(); ++a)
          for (int b = 0; b < S.group->order(); ++b)
            z.at(a, b) = h2.basis[i].at(S.to_parent[a], S.to_parent[b]);
        theta[i] = h2A.coords(z);
      }
      for (size_t c = 0; c < h2A.group.factors.size(); ++c) {
        std::vector<Int> coef(k);
        bool nz = false;
        for (int i = 0; i < k; ++i) {
          coef[i] = theta[i][c];
          if (coef[i] != 0) nz = true;
        }
        if (nz) conds.push_back({coef, h2A.group.factors[c]});
      }
    }
    SpanResult cut = finab_cut(moduli, conds);
    out.cut = cut.group;
    out.cut_gens = cut.gens;

    // Gamma-invariance conditions on top of the cut
    auto invconds = conds;
    for (int s = 0; s < datum.gamma->order(); ++s) {
      if (s == datum.gamma->id()) continue;
      std::vector<std::vector<Int>> acted(k);
      for (int i = 0; i < k; ++i)
        acted[i] = h2.coords(cocycle_galois_act(datum, s, h2.basis[i]));
      for (int c = 0; c < k; ++c) {
        std::vector<Int> coef(k);
        bool nz = false;
        for (int i = 0; i < k; ++i) {
          coef[i] = acted[i][c] - (i == c ? Int(1) : Int(0));
          if (coef[i] != 0) nz = true;
        }
        if (nz) invconds.push_back({coef, moduli[c]});
      }
    }
    SpanResult inv = finab_cut(moduli, invconds);
    out.invariant = inv.group;
    out.invariant_gens = inv.gens;
    return out;
  }

  // Sylow route for large groups
  out.via_sylow = true;
  out.sylow = sylow_h2_qz(G, bar_cap);
  const SylowH2& sy = *out.sylow;
  out.full_h2 = sy.group;
  int k = sy.num_gens();
  if (k == 0) return out;
  // generator orders in the ambient stable group
  std::vector<Int> gen_orders;
  for (const auto& part : sy.parts)
    for (const auto& gen : part.stable_gens) {
      Int o(1);
      for (size_t i = 0; i < gen.size(); ++i) {
        const Int& d = part.h2.group.factors[i];
        Int g = gcd(gen[i], d);
        o = lcm(o, d / g);
      }
      gen_orders.push_back(o);
    }
  Int total(1);
  for (const auto& o : gen_orders) total *= o;
  if (total > 4096) throw std::runtime_error("stable H^2 too large for enumeration");

  // collect condition subgroups once
  auto condsubs = bicyclic_conditions(G, tcs.classes, support);
  std::vector<std::vector<Int>> surviving;
  std::vector<Int> idx(k, Int(0));
  long long tot = to_long(total);
  for (long long t = 0; t < tot; ++t) {
    long long tt = t;
    for (int i = 0; i < k; ++i) {
      idx[i] = make_int(tt % to_long(gen_orders[i]));
      tt /= to_long(gen_orders[i]);
    }
    bool ok = true;
    for (const auto& A : condsubs) {
      if (!sy.combo_restricts_trivially(G, idx, A)) {
        ok = false;
        break;
      }
    }
    if (ok && t != 0) surviving.push_back(idx);
  }
  // structure of the surviving subgroup inside ⊕ Z/gen_orders
  SpanResult cut = finab_span(surviving, gen_orders);
  out.cut = cut.group;
  out.cut_gens = cut.gens;

  // Gamma action: supported when the action on G is trivial (then sigma acts
  // by cyc multiplication on classes)
  bool action_trivial = true;
  for (int s = 0; s < datum.gamma->order() && action_trivial; ++s)
    for (int x = 0; x < G.order(); ++x)
      if (datum.action[s][x] != x) {
        action_trivial = false;
        break;
      }
  if (!action_trivial)
    throw std::runtime_error("nontrivial Galois action on a group above the bar cap is unsupported");
  std::vector<std::vector<Int>> inv_surv;
  for (const auto& v : surviving) {
    bool ok = true;
    for (int s = 0; s < datum.gamma->order() && ok; ++s) {
      // (cyc(sigma) - 1) x = 0 componentwise against generator orders
      for (int i = 0; i < k && ok; ++i) {
        Int val = (make_int(datum.cyc[s]) - 1) * v[i] % gen_orders[i];
        if (val != 0) ok = false;
      }
    }
    if (ok) inv_surv.push_back(v);
  }
  SpanResult inv = finab_span(inv_surv, gen_orders);
  out.invariant = inv.group;
  out.invariant_gens = inv.gens;
  return out;
}

TwoCocycle GeometricBrauer::invariant_gen_cocycle(int k, const FiniteGroup& G) const {
  if (!h2) throw std::runtime_error("cocycle representatives only available below the bar cap");
  return h2->from_coords(invariant_gens[k], G);
}

CentralExtension extension_from_cocycle(const FiniteGroup& G, const TwoCocycle& f) {
  long long n = f.n;
  int N = G.order();
  int M = (int)(n * N);
  std::vector<int> table((size_t)M * M);
  for (long long a = 0; a < n; ++a)
    for (int g = 0; g < N; ++g)
      for (long long b = 0; b < n; ++b)
        for (int h = 0; h < N; ++h) {
          long long c = (a + b + f.at(g, h)) % n;
          int idx1 = (int)(a * N + g), idx2 = (int)(b * N + h);
          table[(size_t)idx1 * M + idx2] = (int)(c * N + G.mul(g, h));
        }
  CentralExtension ext;
  ext.E = std::make_shared<FiniteGroup>(FiniteGroup::from_cayley(std::move(table), M));
  ext.n = n;
  ext.proj.resize(M);
  for (int i = 0; i < M; ++i) ext.proj[i] = i % N;
  ext.kernel_gen = (int)(1 % n) * N + G.id();
  if (n == 1) ext.kernel_gen = G.id();
  for (long long a = 0; a < n; ++a) ext.kernel.push_back((int)(a * N + G.id()));
  return ext;
}

namespace {

// all valid lift sections over a conjugacy class: E-conjugation orbits of
// lifts that biject onto the class
std::vector<std::vector<int>> lift_sections(const FiniteGroup& G, const CentralExtension& ext,
                                            const std::vector<int>& class_members) {
  const FiniteGroup& E = *ext.E;
  int g0 = class_members[0];
  std::set<std::vector<int>> found;
  for (int eps = 0; eps < E.order(); ++eps) {
    if (ext.proj[eps] != g0) continue;
    std::set<int> orbit;
    for (int x = 0; x < E.order(); ++x) orbit.insert(E.conj(x, eps));
    if (orbit.size() != class_members.size()) continue;
    std::set<int> projs;
    for (int o : orbit) projs.insert(ext.proj[o]);
    if (projs.size() != orbit.size()) continue;
    found.insert(std::vector<int>(orbit.begin(), orbit.end()));
  }
  return std::vector<std::vector<int>>(found.begin(), found.end());
}

// greedy generating set of a group (ascending index)
std::vector<int> generating_set(const FiniteGroup& G) {
  std::vector<int> gens;
  std::vector<char> have(G.order(), 0);
  auto closure_size = [&](const std::vector<int>& gg) {
    auto s = G.subgroup_generated(gg);
    return s.order();
  };
  std::vector<int> cur;
  int sz = 1;
  for (int x = 0; x < G.order() && sz < G.order(); ++x) {
    std::vector<int> trial = cur;
    trial.push_back(x);
    int s = closure_size(trial);
    if (s > sz) {
      cur = trial;
      sz = s;
    }
  }
  (void)have;
  return cur;
}

// automorphisms of E lifting a given automorphism of G and acting on the
// kernel generator z by z -> z^u
std::vector<std::vector<int>> lift_automorphisms(const FiniteGroup& G, const CentralExtension& ext,
                                                 const std::vector<int>& g_auto, long long u) {
  const FiniteGroup& E = *ext.E;
  int M = E.order();
  std::vector<int> egens = generating_set(E);
  if (egens.empty()) return {std::vector<int>{E.id()}};
  // candidate images per generator
  std::vector<std::vector<int>> cands(egens.size());
  for (size_t i = 0; i < egens.size(); ++i) {
    int target = g_auto[ext.proj[egens[i]]];
    for (int y = 0; y < M; ++y)
      if (ext.proj[y] == target) cands[i].push_back(y);
  }
  int kz = ext.kernel_gen;
  int kz_target = E.pow(kz, u);
  std::vector<std::vector<int>> out;
  std::vector<size_t> pick(egens.size(), 0);
  for (;;) {
    // build map by BFS closure
    std::vector<int> val(M, -1);
    val[E.id()] = E.id();
    std::vector<int> frontier{E.id()};
    bool bad = false;
    while (!frontier.empty() && !bad) {
      std::vector<int> next;
      for (int x : frontier)
        for (size_t i = 0; i < egens.size(); ++i) {
          int y = E.mul(egens[i], x);
          int img = E.mul((int)cands[i][pick[i]], val[x]);
          if (val[y] < 0) {
            val[y] = img;
            next.push_back(y);
          } else if (val[y] != img) {
            bad = true;
            break;
          }
        }
      frontier = std::move(next);
    }
    if (!bad)
      for (int x = 0; x < M && !bad; ++x)
        if (val[x] < 0) bad = true; // generators failed to reach everything (shouldn't happen)
    if (!bad) {
      // homomorphism + bijectivity + kernel action + projection compat
      std::vector<char> hit(M, 0);
      for (int x = 0; x < M && !bad; ++x) {
        if (hit[val[x]]) bad = true;
        hit[val[x]] = 1;
        if (ext.proj[val[x]] != g_auto[ext.proj[x]]) bad = true;
      }
      for (int x = 0; x < M && !bad; ++x)
        for (int y = 0; y < M; ++y)
          if (val[E.mul(x, y)] != E.mul(val[x], val[y])) {
            bad = true;
            break;
          }
      if (!bad && val[kz] != kz_target) bad = true;
      if (!bad) out.push_back(val);
    }
    // next assignment
    size_t i = 0;
    while (i < egens.size()) {
      if (++pick[i] < cands[i].size()) break;
      pick[i] = 0;
      ++i;
    }
    if (i == egens.size()) break;
  }
  return out;
}

struct GammaExt {
  std::shared_ptr<FiniteGroup> group;
  std::vector<int> to_base;
  std::vector<long long> cyc; // unit mod eE
  long long conductor = 1;
  std::vector<int> frob;
};

GammaExt build_gamma_ext(const GaloisDatum& datum, long long eE) {
  long long eG = datum.G->exponent();
  if (eE % eG != 0) throw std::runtime_error("exp(G) must divide exp(E)");
  GammaExt ge;
  std::vector<std::pair<int, long long>> elems; // (base index, unit mod eE)
  for (int s = 0; s < datum.gamma->order(); ++s)
    for (long long v = 1; v <= eE; ++v) {
      if (std::gcd(v, eE) != 1) continue;
      long long vv = v % eE;
      if (eG == 1 || ((vv - datum.cyc[s]) % eG + eG) % eG == 0) elems.push_back({s, vv});
    }
  if (eE == 1) elems = {{datum.gamma->id(), 1}};
  int m = (int)elems.size();
  auto find = [&](int s, long long v) {
    for (int i = 0; i < m; ++i)
      if (elems[i].first == s && elems[i].second == ((v % eE) + eE) % eE) return i;
    throw std::runtime_error("gamma_ext closure bug");
  };
  std::vector<int> table((size_t)m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      table[(size_t)i * m + j] = find(datum.gamma->mul(elems[i].first, elems[j].first),
                                      eE == 1 ? 1 : (elems[i].second * elems[j].second) % eE);
  ge.group = std::make_shared<FiniteGroup>(FiniteGroup::from_cayley(std::move(table), m));
  for (auto& [s, v] : elems) {
    ge.to_base.push_back(s);
    ge.cyc.push_back(v);
  }
  ge.conductor = std::lcm(datum.conductor, eE);
  ge.frob.assign(ge.conductor, -1);
  for (long long r = 0; r < ge.conductor; ++r) {
    if (std::gcd(r, ge.conductor) != 1) continue;
    int s = datum.frob_table.empty() || datum.conductor == 1
                ? datum.gamma->id()
                : datum.frob_table[r % datum.conductor];
    if (s < 0) continue;
    ge.frob[r] = find(s, eE == 1 ? 1 : r % eE);
  }
  if (ge.conductor == 1) ge.frob = {ge.group->id()};
  return ge;
}

} // namespace

std::string MarkedCentralExtension::description() const {
  return "extension order " + std::to_string(ext.E->order()) + " kernel " + std::to_string(ext.n);
}

std::optional<MarkedCentralExtension> marking_descent_search(const CentralExtension& ext,
                                                             const GaloisDatum& datum,
                                                             const TwistedClassSet& tcs,
                                                             const std::vector<int>& support) {
  const FiniteGroup& G = *datum.G;
  const FiniteGroup& E = *ext.E;
  long long eE = E.exponent();

  // candidate markings per support class
  std::vector<std::vector<std::vector<int>>> sections;
  for (int c : support) {
    auto secs = lift_sections(G, ext, tcs.classes.classes[c]);
    if (secs.empty()) return std::nullopt;
    sections.push_back(secs);
  }

  GammaExt ge = build_gamma_ext(datum, eE);
  const FiniteGroup& GE = *ge.group;
  std::vector<int> gens = generating_set(GE);
  if (gens.empty()) gens = {GE.id()};

  std::vector<std::vector<std::vector<int>>> cand(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) {
    int s = ge.to_base[gens[i]];
    long long u = ge.cyc[gens[i]] % ext.n;
    cand[i] = lift_automorphisms(G, ext, datum.action[s], u);
    if (cand[i].empty()) return std::nullopt;
  }

  auto twisted = [&](const std::vector<int>& alpha, long long u, int eps) {
    return E.pow(alpha[eps], inverse_mod(u, eE));
  };

  // enumerate automorphism assignments, extend over gamma', check marking
  std::vector<size_t> pick(gens.size(), 0);
  long long marking_combos = 1;
  for (const auto& s : sections) {
    marking_combos *= (long long)s.size();
    if (marking_combos > 4096) throw std::runtime_error("marking search space too large");
  }
  for (;;) {
    // extend to all of gamma'
    int m = GE.order();
    std::vector<std::vector<int>> act(m);
    std::vector<char> have(m, 0);
    std::vector<int> idmap(E.order());
    std::iota(idmap.begin(), idmap.end(), 0);
    act[GE.id()] = idmap;
    have[GE.id()] = 1;
    std::vector<int> frontier{GE.id()};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (size_t i = 0; i < gens.size(); ++i) {
          int y = GE.mul(gens[i], x);
          if (!have[y]) {
            std::vector<int> comp(E.order());
            for (int t = 0; t < E.order(); ++t) comp[t] = cand[i][pick[i]][act[x][t]];
            act[y] = std::move(comp);
            have[y] = 1;
            next.push_back(y);
          }
        }
      frontier = std::move(next);
    }
    bool consistent = true;
    for (int x = 0; x < m && consistent; ++x) {
      if (!have[x]) {
        consistent = false;
        break;
      }
      for (int y = 0; y < m && consistent; ++y) {
        int xy = GE.mul(x, y);
        for (int t = 0; t < E.order(); ++t)
          if (act[xy][t] != act[x][act[y][t]]) {
            consistent = false;
            break;
          }
      }
    }
    if (consistent) {
      // kernel action must be cyc on every element
      for (int x = 0; x < m && consistent; ++x)
        if (act[x][ext.kernel_gen] != E.pow(ext.kernel_gen, ge.cyc[x])) consistent = false;
    }
    if (consistent) {
      // search marking choices stable under the twisted action
      std::vector<size_t> mpick(sections.size(), 0);
      for (;;) {
        std::set<int> mark;
        for (size_t i = 0; i < sections.size(); ++i)
          mark.insert(sections[i][mpick[i]].begin(), sections[i][mpick[i]].end());
        bool stable = true;
        for (int x = 0; x < m && stable; ++x) {
          for (int epsv : mark)
            if (!mark.count(twisted(act[x], ge.cyc[x], epsv))) {
              stable = false;
              break;
            }
        }
        if (stable) {
          MarkedCentralExtension mce;
          mce.ext = ext;
          mce.base = datum;
          mce.gamma_ext = ge.group;
          mce.gamma_ext_to_base = ge.to_base;
          mce.cyc_ext = ge.cyc;
          mce.conductor_ext = ge.conductor;
          mce.frob_ext = ge.frob;
          mce.action = act;
          for (size_t i = 0; i < sections.size(); ++i) mce.marking.push_back(sections[i][mpick[i]]);
          return mce;
        }
        size_t i = 0;
        while (i < sections.size()) {
          if (++mpick[i] < sections[i].size()) break;
          mpick[i] = 0;
          ++i;
        }
        if (i == sections.size()) break;
      }
    }
    size_t i = 0;
    while (i < gens.size()) {
      if (++pick[i] < cand[i].size()) break;
      pick[i] = 0;
      ++i;
    }
    if (i == gens.size()) break;
  }
  return std::nullopt;
}

std::vector<ResidueDatum> residue_data_algebraic(const AlgebraicBrauer& alg, int gen,
                                                 const GaloisDatum& datum,
                                                 const TwistedClassSet& tcs) {
  std::vector<ResidueDatum> out;
  const auto& cocycle = alg.cocycles[gen];
  const FiniteGroup& G = *datum.G;
  std::vector<int> pos(tcs.count(), -1);
  for (size_t i = 0; i < alg.lattice.support.size(); ++i) pos[alg.lattice.support[i]] = (int)i;

  for (const auto& orbit : tcs.orbits()) {
    int c0 = orbit[0];
    if (c0 == tcs.identity_class) {
      ResidueDatum rd;
      rd.kind = ResidueKind::Trivial;
      out.push_back(rd);
      continue;
    }
    ResidueDatum rd;
    rd.modulus = datum.conductor;
    rd.value.assign(rd.modulus, std::nullopt);
    bool nontrivial = false;
    for (long long r = 0; r < rd.modulus; ++r) {
      if (rd.modulus > 1 && std::gcd(r, rd.modulus) != 1) continue;
      int s = rd.modulus == 1 ? datum.gamma->id() : datum.frob_table[r];
      if (s < 0) continue;
      if (tcs.gamma_action[s][c0] != c0) continue; // off-stabilizer
      // age of the character part of F(sigma) at the class representative
      Rat v(0);
      int repg = tcs.classes.rep(c0);
      for (int i = 0; i < (int)alg.lattice.basis_chi.size(); ++i) {
        Int coeff = cocycle[s][i];
        if (coeff == 0) continue;
        v += Rat(coeff) * alg.lattice.basis_chi[i].val[repg];
      }
      v = mod1(v);
      rd.value[r] = v;
      if (v != 0) nontrivial = true;
    }
    rd.kind = nontrivial ? ResidueKind::AlgebraicCharacter : ResidueKind::Trivial;
    if (!nontrivial) rd.value.clear(), rd.modulus = 1;
    out.push_back(rd);
  }
  return out;
}

std::vector<ResidueDatum> residue_data_extension(const MarkedCentralExtension& mce,
                                                 const GaloisDatum& datum,
                                                 const TwistedClassSet& tcs) {
  const FiniteGroup& G = *datum.G;
  const FiniteGroup& E = *mce.ext.E;
  long long eE = E.exponent();
  std::vector<ResidueDatum> out;
  for (const auto& orbit : tcs.orbits()) {
    int c0 = orbit[0];
    if (c0 == tcs.identity_class) {
      ResidueDatum rd;
      out.push_back(rd);
      continue;
    }
    auto secs = lift_sections(G, mce.ext, tcs.classes.classes[c0]);
    if (secs.empty()) {
      ResidueDatum rd;
      rd.kind = ResidueKind::GeometricallyNontrivial;
      out.push_back(rd);
      continue;
    }
    const std::vector<int>& s0 = secs[0];
    std::set<int> s0set(s0.begin(), s0.end());
    int eps0 = s0[0];
    ResidueDatum rd;
    rd.modulus = mce.conductor_ext;
    rd.value.assign(rd.modulus, std::nullopt);
    bool nontrivial = false;
    for (long long r = 0; r < rd.modulus; ++r) {
      if (rd.modulus > 1 && std::gcd(r, rd.modulus) != 1) continue;
      int x = rd.modulus == 1 ? mce.gamma_ext->id() : mce.frob_ext[r];
      if (x < 0) continue;
      int sbase = mce.gamma_ext_to_base[x];
      if (tcs.gamma_action[sbase][c0] != c0) continue;
      int img = E.pow(mce.action[x][eps0], inverse_mod(mce.cyc_ext[x], eE));
      // find t with z^-t img in s0
      std::optional<long long> tval;
      int zi = E.inv(mce.ext.kernel_gen);
      int cur = img;
      for (long long t = 0; t < mce.ext.n; ++t) {
        if (s0set.count(cur)) {
          tval = t;
          break;
        }
        cur = E.mul(zi, cur);
      }
      if (!tval) throw std::runtime_error("twisted image escaped the lift fibre (bug)");
      Rat v = mod1(make_rat(*tval) / make_rat(mce.ext.n));
      rd.value[r] = v;
      if (v != 0) nontrivial = true;
    }
    rd.kind = nontrivial ? ResidueKind::AlgebraicCharacter : ResidueKind::Trivial;
    if (!nontrivial) rd.value.clear(), rd.modulus = 1;
    out.push_back(rd);
  }
  return out;
}

namespace {

// mod-d cocycle representative of a Q/Z class of order d given at modulus n
TwoCocycle reduce_class_modulus(const FiniteGroup& G, const TwoCocycle& f, long long d) {
  long long n = f.n;
  if (n % d != 0) throw std::runtime_error("order must divide the modulus");
  long long q = n / d;
  if (q == 1) return f;
  // solve f = d1(u) + sum lambda_j B_j (mod q)
  CharacterGroup cg = G.one_dim_characters();
  std::vector<TwoCocycle> bocks;
  for (const auto& chi : cg.all)
    if (!chi.is_trivial()) bocks.push_back(bockstein(G, chi, n));
  std::vector<int> elems;
  for (int x = 0; x < G.order(); ++x)
    if (x != G.id()) elems.push_back(x);
  std::vector<int> pos(G.order(), -1);
  for (int i = 0; i < (int)elems.size(); ++i) pos[elems[i]] = i;
  int kk = (int)elems.size(), nb = (int)bocks.size();
  IntMat A(kk * kk, kk + nb);
  std::vector<Int> b(kk * kk, Int(0));
  int row = 0;
  for (int g : elems)
    for (int h : elems) {
      A.at(row, pos[g]) += 1;
      A.at(row, pos[h]) += 1;
      int gh = G.mul(g, h);
      if (gh != G.id()) A.at(row, pos[gh]) -= 1;
      for (int j = 0; j < nb; ++j) A.at(row, kk + j) = make_int(bocks[j].at(g, h));
      b[row] = make_int(f.at(g, h));
      ++row;
    }
  auto sol = solve_mod(A, b, make_int(q));
  if (!sol) throw std::runtime_error("class has no mod-d representative (bug)");
  // F = f - d1(u) - sum lambda B  (mod n), divisible by q
  TwoCocycle F = f;
  for (int g : elems)
    for (int h : elems) {
      Int v = make_int(F.at(g, h));
      v -= (*sol)[pos[g]] + (*sol)[pos[h]];
      int gh = G.mul(g, h);
      if (gh != G.id()) v += (*sol)[pos[gh]];
      for (int j = 0; j < nb; ++j) v -= (*sol)[kk + j] * make_int(bocks[j].at(g, h));
      Int nn = make_int(n); Int r;
      mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), nn.get_mpz_t());
      F.at(g, h) = to_long(r);
    }
  TwoCocycle out = TwoCocycle::zero(G, d);
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h) {
      if (F.at(g, h) % q != 0) throw std::runtime_error("mod-d reduction failed (bug)");
      out.at(g, h) = (F.at(g, h) / q) % d;
    }
  if (!out.verify(G)) throw std::runtime_error("mod-d representative is not a cocycle (bug)");
  return out;
}

} // namespace

BrauerReport brauer_report(const GaloisDatum& datum, const TwistedClassSet& tcs,
                           const std::vector<int>& support, int bar_cap) {
  const FiniteGroup& G = *datum.G;
  // support must generate G
  {
    std::vector<int> gens;
    for (int c : support)
      for (int x : tcs.classes.classes[c]) gens.push_back(x);
    if (G.subgroup_generated(gens).order() != G.order())
      throw std::runtime_error("support must generate the group (finiteness warning per spec)");
  }
  BrauerReport rep;
  rep.support = support;
  rep.orbits = tcs.orbits();
  rep.algebraic = algebraic_brauer(datum, tcs, support);
  rep.geometric = geometric_brauer(datum, tcs, support, bar_cap);

  for (int k = 0; k < (int)rep.algebraic.cocycles.size(); ++k) {
    BrauerGenerator bg;
    bg.algebraic = true;
    bg.index = k;
    bg.order = to_long(rep.algebraic.group.factors[k]);
    bg.description = "algebraic cocycle of order " + std::to_string(bg.order);
    bg.residues = residue_data_algebraic(rep.algebraic, k, datum, tcs);
    rep.generators.push_back(std::move(bg));
  }

  // resolve every nonzero element of the invariant geometric part
  Int inv_order = rep.geometric.invariant.order();
  bool all_resolved = true;
  std::vector<std::vector<Int>> image_elements; // surviving (descending) classes
  if (inv_order > 1) {
    if (rep.geometric.via_sylow)
      throw std::runtime_error(
          "descent above the bar-resolution cap is unsupported (invariant geometric part "
          "nontrivial)");
    const CohomGroup& h2 = *rep.geometric.h2;
    // enumerate elements of the invariant subgroup
    int ngen = (int)rep.geometric.invariant_gens.size();
    std::vector<long long> orders;
    for (const auto& d : rep.geometric.invariant.factors) orders.push_back(to_long(d));
    std::vector<long long> idx(ngen, 0);
    long long total = 1;
    for (long long o : orders) total *= o;
    std::map<std::vector<Int>, bool> resolved; // class coords -> descends?
    for (long long t = 1; t < total; ++t) {
      long long tt = t;
      std::vector<Int> coords(h2.group.factors.size(), Int(0));
      for (int i = 0; i < ngen; ++i) {
        long long ci = tt % orders[i];
        tt /= orders[i];
        for (size_t j = 0; j < coords.size(); ++j)
          coords[j] = (coords[j] + make_int(ci) * rep.geometric.invariant_gens[i][j]) %
                      h2.group.factors[j];
      }
      bool zero = true;
      for (const auto& c : coords)
        if (c != 0) zero = false;
      if (zero) continue;
      if (resolved.count(coords)) continue;
      TwoCocycle f = h2.from_coords(coords, G);
      // order of the class
      long long d = 1;
      for (size_t j = 0; j < coords.size(); ++j) {
        Int dj = h2.group.factors[j];
        Int g = gcd(coords[j], dj);
        d = std::lcm(d, to_long(dj / g));
      }
      TwoCocycle fd = reduce_class_modulus(G, f, d);
      CentralExtension ext = extension_from_cocycle(G, fd);
      auto mce = marking_descent_search(ext, datum, tcs, support);
      resolved[coords] = mce.has_value();
      if (mce) {
        image_elements.push_back(coords);
        // keep as generator only if independent from current descended set
        rep.descended.push_back(std::move(*mce));
        BrauerGenerator bg;
        bg.algebraic = false;
        bg.index = (int)rep.descended.size() - 1;
        bg.order = d;
        bg.description = rep.descended.back().description();
        bg.residues = residue_data_extension(rep.descended.back(), datum, tcs);
        rep.generators.push_back(std::move(bg));
      } else {
        rep.excluded_invariant_gens.push_back((int)resolved.size() - 1);
      }
    }
    // survivors must form a subgroup (sanity)
    std::vector<Int> moduli = h2.group.factors;
    SpanResult img = finab_span(image_elements, moduli);
    Int img_order = img.group.order();
    rep.total_lo = rep.algebraic.group.order() * img_order;
    rep.total_hi = all_resolved ? rep.total_lo : rep.algebraic.group.order() * inv_order;
    rep.exact = true;
    rep.total = rep.algebraic.group;
    for (const auto& d : img.group.factors) rep.total.factors.push_back(d);
    std::sort(rep.total.factors.begin(), rep.total.factors.end());
  } else {
    rep.total_lo = rep.total_hi = rep.algebraic.group.order();
    rep.exact = true;
    rep.total = rep.algebraic.group;
  }
  return rep;
}

} // namespace malle
