#include "malle/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <atomic>
#include <thread>

namespace malle {

std::vector<long long> primes_up_to(long long P) {
  std::vector<long long> out;
  if (P < 2) return out;
  std::vector<char> comp(P + 1, 0);
  for (long long i = 2; i <= P; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (long long j = i * i; j <= P; j += i) comp[j] = 1;
  }
  return out;
}

EulerProductResult euler_product(const EulerProductSpec& spec, long long P, int threads) {
  std::vector<long long> ps = primes_up_to(P);
  const size_t BLOCK = 4096; // fixed block size keeps the reduction order stable
  size_t nblocks = (ps.size() + BLOCK - 1) / BLOCK;
  std::vector<long double> block_prod(nblocks, 1.0L);
  std::vector<int> block_cnt(nblocks, 0), block_skip(nblocks, 0);
  std::vector<double> block_last(nblocks, 1.0);

  auto work = [&](size_t bi) {
    size_t lo = bi * BLOCK, hi = std::min(ps.size(), lo + BLOCK);
    long double prod = 1.0L;
    for (size_t i = lo; i < hi; ++i) {
      auto f = spec.factor(ps[i]);
      if (!f) {
        block_skip[bi]++;
        continue;
      }
      double fv = to_double(*f);
      prod *= (long double)fv;
      block_cnt[bi]++;
      block_last[bi] = fv;
    }
    block_prod[bi] = prod;
  };

  if (threads <= 1) {
    for (size_t bi = 0; bi < nblocks; ++bi) work(bi);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          size_t bi = next.fetch_add(1);
          if (bi >= nblocks) return;
          work(bi);
        }
      });
    for (auto& th : pool) th.join();
  }

  EulerProductResult res;
  res.P = P;
  long double acc = 1.0L;
  for (size_t bi = 0; bi < nblocks; ++bi) {
    acc *= block_prod[bi];
    res.factors += block_cnt[bi];
    res.skipped += block_skip[bi];
    if (block_cnt[bi]) res.last_factor = block_last[bi];
  }
  res.tail_product = (double)acc;
  res.value = to_double(spec.prefactor) * res.tail_product;
  return res;
}

namespace {

struct BrElement {
  std::vector<long long> coeffs; // per report generator
  std::string name;
  bool trivial() const {
    for (long long c : coeffs)
      if (c) return false;
    return true;
  }
};

std::vector<BrElement> enumerate_elements(const BrauerReport& br) {
  std::vector<long long> orders;
  for (const auto& g : br.generators) orders.push_back(g.order);
  long long total = 1;
  for (long long o : orders) total *= o;
  if (total > 512) throw std::runtime_error("Brauer group too large to enumerate");
  std::vector<BrElement> out;
  for (long long t = 0; t < total; ++t) {
    BrElement e;
    long long tt = t;
    for (long long o : orders) {
      e.coeffs.push_back(tt % o);
      tt /= o;
    }
    if (e.trivial())
      e.name = "1";
    else {
      for (size_t i = 0; i < e.coeffs.size(); ++i)
        if (e.coeffs[i]) {
          if (!e.name.empty()) e.name += " + ";
          if (e.coeffs[i] != 1) e.name += std::to_string(e.coeffs[i]) + "*";
          e.name += br.generators[i].description;
        }
    }
    out.push_back(std::move(e));
  }
  return out;
}

// residue data of a combination of generators, per orbit
std::vector<ResidueDatum> combine_residues(const BrauerReport& br, const BrElement& el) {
  size_t norb = br.orbits.size();
  std::vector<ResidueDatum> out(norb);
  for (size_t o = 0; o < norb; ++o) {
    int geom_terms = 0;
    long long modulus = 1;
    for (size_t i = 0; i < el.coeffs.size(); ++i) {
      if (!el.coeffs[i]) continue;
      const ResidueDatum& rd = br.generators[i].residues[o];
      if (rd.kind == ResidueKind::GeometricallyNontrivial) {
        if (el.coeffs[i] % br.generators[i].order != 0) ++geom_terms;
      } else if (rd.kind == ResidueKind::AlgebraicCharacter) {
        modulus = std::lcm(modulus, rd.modulus);
      }
    }
    if (geom_terms > 1)
      throw std::runtime_error("cannot combine residues of two geometrically nontrivial classes");
    if (geom_terms == 1) {
      out[o].kind = ResidueKind::GeometricallyNontrivial;
      continue;
    }
    ResidueDatum rd;
    rd.modulus = modulus;
    rd.value.assign(modulus, std::nullopt);
    bool nontrivial = false;
    for (long long r = 0; r < modulus; ++r) {
      if (modulus > 1 && std::gcd(r, modulus) != 1) continue;
      Rat v(0);
      bool defined = true;
      for (size_t i = 0; i < el.coeffs.size() && defined; ++i) {
        if (!el.coeffs[i]) continue;
        const ResidueDatum& g = br.generators[i].residues[o];
        if (g.kind != ResidueKind::AlgebraicCharacter) continue;
        auto gv = g.value[r % g.modulus];
        if (!gv)
          defined = false;
        else
          v += make_rat(el.coeffs[i]) * (*gv);
      }
      if (!defined) continue;
      v = mod1(v);
      rd.value[r] = v;
      if (v != 0) nontrivial = true;
    }
    rd.kind = nontrivial ? ResidueKind::AlgebraicCharacter : ResidueKind::Trivial;
    if (!nontrivial) {
      rd.value.clear();
      rd.modulus = 1;
    }
    out[o] = std::move(rd);
  }
  return out;
}

std::vector<long long> bad_primes(const GaloisDatum& datum, const HeightSpec& hs) {
  std::set<long long> bad;
  long long n = datum.G->order();
  for (long long p = 2; p <= n; ++p)
    if (n % p == 0) {
      bad.insert(p);
      while (n % p == 0) n /= p;
    }
  long long c = datum.conductor;
  for (long long p = 2; p <= c; ++p)
    if (c % p == 0) {
      bad.insert(p);
      while (c % p == 0) c /= p;
    }
  for (const auto& [p, _] : hs.bad_places) bad.insert(p);
  return std::vector<long long>(bad.begin(), bad.end());
}

// Decomposition of the Frobenius permutation character on the minimal classes
// into real Dirichlet characters, for the Artin normalization.
struct ArtinData {
  double l_value = 1;        // L(V, 1)
  double bad_correction = 1; // product over bad p of L_p(V, 1)
};

ArtinData artin_data(const GaloisDatum& datum, const TwistedClassSet& tcs,
                     const std::vector<int>& minimal, int b,
                     const std::vector<long long>& bad) {
  // t(sigma) = #fixed minimal classes; decompose over characters of gamma
  const FiniteGroup& gamma = *datum.gamma;
  CharacterGroup chars = gamma.one_dim_characters();
  int m = gamma.order();
  std::vector<long long> t(m, 0);
  for (int s = 0; s < m; ++s)
    for (int c : minimal)
      if (tcs.gamma_action[s][c] == c) t[s]++;
  ArtinData out;
  for (const auto& chi : chars.all) {
    // multiplicity <t, chi> (characters here are Q/Z valued; need real ones)
    double re = 0, im = 0;
    for (int s = 0; s < m; ++s) {
      double th = 2 * M_PI * to_double(chi.val[s]);
      re += (double)t[s] * std::cos(th);
      im -= (double)t[s] * std::sin(th);
    }
    re /= m;
    im /= m;
    long long mult = std::llround(re);
    if (std::abs(re - (double)mult) > 1e-9 || std::abs(im) > 1e-9)
      throw std::runtime_error("permutation character decomposition failed");
    if (mult == 0) continue;
    if (chi.is_trivial()) {
      if (mult != b) throw std::runtime_error("trivial multiplicity must equal b");
      continue;
    }
    // require a real (quadratic) character
    for (int s = 0; s < m; ++s)
      if (chi.val[s] != 0 && chi.val[s] != Rat(1, 2))
        throw std::runtime_error("non-quadratic Artin piece: use zeta mode");
    // Dirichlet values on residues mod conductor
    long long N = datum.conductor;
    std::vector<int> dchi(N, 0);
    for (long long r = 0; r < N; ++r) {
      if (N > 1 && std::gcd(r, N) != 1) continue;
      int s = N == 1 ? gamma.id() : datum.frob_table[r];
      if (s < 0) continue;
      dchi[r] = chi.val[s] == 0 ? 1 : -1;
    }
    // primitive conductor f | N
    long long f = N;
    for (long long cand = 1; cand <= N; ++cand) {
      if (N % cand != 0) continue;
      bool ok = true;
      std::vector<int> vals(cand, 2);
      for (long long r = 0; r < N && ok; ++r) {
        if (dchi[r] == 0) continue;
        long long rr = r % cand;
        if (std::gcd(rr, cand) != 1 && cand > 1) {
          ok = false;
          break;
        }
        if (vals[rr] == 2)
          vals[rr] = dchi[r];
        else if (vals[rr] != dchi[r])
          ok = false;
      }
      if (ok) {
        f = cand;
        break;
      }
    }
    std::vector<int> prim(f, 0);
    for (long long r = 0; r < N; ++r)
      if (dchi[r]) prim[r % f] = dchi[r];
    double L1 = dirichlet_L1(prim, f);
    for (long long i = 0; i < mult; ++i) out.l_value *= L1;
    for (long long p : bad) {
      if (f % p == 0 || p == 0) continue;
      double lp = 1.0 / (1.0 - (double)prim[p % f] / (double)p);
      for (long long i = 0; i < mult; ++i) out.bad_correction *= lp;
    }
  }
  return out;
}

} // namespace

double dirichlet_L1(const std::vector<int>& chi, long long f) {
  if (f == 1) return 1.0;
  bool odd = chi[(f - 1) % f] == -1; // chi(-1)
  if (odd) {
    long long s = 0;
    for (long long a = 1; a < f; ++a) s += (long long)chi[a] * a;
    return -M_PI * (double)s / std::pow((double)f, 1.5);
  }
  double s = 0;
  for (long long a = 1; a < f; ++a)
    if (chi[a]) s += chi[a] * std::log(std::sin(M_PI * (double)a / (double)f));
  return -s / std::sqrt((double)f);
}

LeadingConstantReport leading_constant(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                       const OrbifoldLineBundle& L, const FujitaReport& fr,
                                       const HeightSpec& hs, const BrauerReport& br, long long P,
                                       ConvergenceMode mode, int threads, bool naive) {
  if (!fr.balanced)
    throw precondition_error("unbalanced bundle: use the Iitaka decomposition report");
  const FiniteGroup& G = *datum.G;
  LeadingConstantReport rep;
  rep.a = fr.a;
  rep.b = fr.b;
  rep.balanced = true;
  rep.P = P;
  rep.mode = mode;
  rep.naive = naive;
  rep.identification_dependent = fr.identification_dependent;
  int nchars = rational_characters(datum).order();
  auto ec = effective_cone_constant(fr, nchars);
  rep.alpha_star = ec.alpha_star;
  rep.a_b1_over_chars = ec.a_pow_b_minus_1_over_chars;
  if (G.has_perms()) rep.groupoid_factor = groupoid_factor_for_embedding(G);

  Rat factorial(1);
  for (int i = 2; i <= rep.b - 1; ++i) factorial *= i;
  Rat front = ec.a_pow_b_minus_1_over_chars / factorial;

  auto bad = bad_primes(datum, hs);
  std::vector<BrElement> elements = enumerate_elements(br);
  if (naive) elements.resize(1); // trivial element only

  // archimedean slices: labels of the unique real place (or "total" only)
  int real_place = -1;
  bool single_arch = datum.arch.size() == 1;
  if (single_arch && datum.arch[0].real) real_place = 0;
  std::vector<std::string> slices{"total"};
  if (real_place >= 0)
    for (const auto& pt : real_points(datum, real_place)) slices.push_back(pt.label);

  ArtinData ad;
  if (mode == ConvergenceMode::Artin) ad = artin_data(datum, tcs, fr.minimal_classes, fr.b, bad);

  for (const auto& el : elements) {
    std::vector<ResidueDatum> res = combine_residues(br, el);
    // archimedean factor per slice: sum the per-cocycle phases of the
    // generators appearing in the element
    std::map<std::string, Rat> arch_by_slice;
    {
      Rat total(1);
      std::map<std::string, Rat> per_point_all;
      for (size_t i = 0; i < datum.arch.size(); ++i) {
        std::vector<Rat> phases(G.order(), Rat(0));
        for (size_t j = 0; j < el.coeffs.size(); ++j) {
          if (!el.coeffs[j]) continue;
          const BrauerGenerator& g = br.generators[j];
          std::vector<Rat> ph =
              g.algebraic ? arch_phases_algebraic(datum, (int)i, br.algebraic, g.index)
                          : arch_phases(datum, (int)i, br.descended[g.index]);
          for (int x = 0; x < G.order(); ++x)
            phases[x] = mod1(phases[x] + make_rat(el.coeffs[j]) * ph[x]);
        }
        ArchDensity aden = archimedean_from_phases(datum, (int)i, fr.a, hs.arch_heights, phases);
        total *= aden.total;
        if ((int)i == real_place)
          for (const auto& [lab, v] : aden.per_point) per_point_all[lab] = v;
      }
      arch_by_slice["total"] = total;
      for (const auto& [lab, v] : per_point_all) arch_by_slice[lab] = v;
    }

    // bad-place factors
    Rat bad_factor(1);
    std::vector<std::pair<std::string, Rat>> parts;
    for (long long p : bad) {
      auto it = hs.bad_places.find(p);
      if (it == hs.bad_places.end())
        throw precondition_error("missing bad-place fixture at p=" + std::to_string(p));
      Rat dens;
      if (el.trivial())
        dens = it->second.plain;
      else {
        int cnt = 0, live = -1;
        for (size_t j = 0; j < el.coeffs.size(); ++j)
          if (el.coeffs[j]) ++cnt, live = (int)j;
        if (cnt != 1 || el.coeffs[live] != 1 || (int)it->second.twisted.size() <= live)
          throw std::runtime_error("missing twisted fixture at p=" + std::to_string(p));
        dens = it->second.twisted[live];
      }
      Rat conv = rat_pow(1 - Rat(1) / make_rat(p), rep.b);
      bad_factor *= dens * conv;
      parts.push_back({"tau_" + std::to_string(p), dens});
      parts.push_back({"conv_" + std::to_string(p), conv});
    }

    // Euler tail over good primes
    std::set<long long> badset(bad.begin(), bad.end());
    EulerProductSpec spec;
    spec.prefactor = Rat(1);
    spec.factor = [&](long long p) -> std::optional<Rat> {
      if (badset.count(p)) return std::nullopt;
      Rat conv = convergence_factor(datum, tcs, fr.minimal_classes, rep.b, mode, p);
      LocalDensity d = twisted_local_density(datum, tcs, L, fr.a, res, br.orbits, p);
      auto ex = d.exact();
      if (!ex) throw std::runtime_error("non-integral exponents in Euler factor");
      return conv * (*ex);
    };
    EulerProductResult er = euler_product(spec, P, threads);
    double tail = er.tail_product;
    if (mode == ConvergenceMode::Artin) tail *= ad.l_value / ad.bad_correction;

    for (const auto& slice : slices) {
      auto ait = arch_by_slice.find(slice);
      if (ait == arch_by_slice.end()) continue;
      ConstantPiece piece;
      piece.element = el.name;
      piece.slice = slice;
      piece.prefactor = front * ait->second * bad_factor;
      piece.parts = parts;
      piece.parts.push_back({"arch", ait->second});
      piece.parts.push_back({"front(a^(b-1)/(#chars (b-1)!))", front});
      piece.tail = tail;
      piece.contribution = to_double(piece.prefactor) * tail;
      piece.last_factor = er.last_factor;
      rep.pieces.push_back(std::move(piece));
    }
  }

  for (const auto& slice : slices) {
    double c = 0, lastdev = 0;
    for (const auto& piece : rep.pieces)
      if (piece.slice == slice) {
        c += piece.contribution;
        lastdev = std::max(lastdev, std::abs(1.0 - piece.last_factor));
      }
    rep.constant_by_slice[slice] = c;
    rep.error_indicator = std::max(rep.error_indicator, lastdev);
  }
  if (rep.constant_by_slice["total"] <= 0)
    throw std::runtime_error("combined constant must be positive");
  return rep;
}

double local_probability(const GaloisDatum& datum, const TwistedClassSet& tcs,
                         const OrbifoldLineBundle& L, const FujitaReport& fr, const HeightSpec& hs,
                         const BrauerReport& br, const std::vector<LocalCondition>& conds,
                         long long P, bool naive) {
  if (conds.empty()) return 1.0;
  // numerator: slice the conditioned places; denominator: full local mass
  LeadingConstantReport base = leading_constant(datum, tcs, L, fr, hs, br, P,
                                                ConvergenceMode::Zeta, 1, naive);
  // Only archimedean point conditions and good-place class conditions supported.
  double num = 0, den = 0;
  std::vector<BrElement> elements = enumerate_elements(br);
  if (naive) elements.resize(1);
  for (const auto& el : elements) {
    std::vector<ResidueDatum> res = combine_residues(br, el);
    // find the piece for this element, slice "total"
    const ConstantPiece* ptotal = nullptr;
    for (const auto& piece : base.pieces)
      if (piece.element == el.name && piece.slice == "total") ptotal = &piece;
    if (!ptotal) throw std::runtime_error("missing piece");
    double contrib_num = ptotal->contribution, contrib_den = ptotal->contribution;
    std::vector<int> orbit_of(tcs.count(), -1);
    for (size_t i = 0; i < br.orbits.size(); ++i)
      for (int c : br.orbits[i]) orbit_of[c] = (int)i;
    for (const auto& cond : conds) {
      if (cond.archimedean) {
        // replace total arch factor by the point mass
        std::vector<Rat> phases(datum.G->order(), Rat(0));
        for (size_t j = 0; j < el.coeffs.size(); ++j) {
          if (!el.coeffs[j]) continue;
          const BrauerGenerator& g = br.generators[j];
          std::vector<Rat> ph =
              g.algebraic ? arch_phases_algebraic(datum, cond.place, br.algebraic, g.index)
                          : arch_phases(datum, cond.place, br.descended[g.index]);
          for (int x = 0; x < datum.G->order(); ++x)
            phases[x] = mod1(phases[x] + make_rat(el.coeffs[j]) * ph[x]);
        }
        ArchDensity full =
            archimedean_from_phases(datum, cond.place, fr.a, hs.arch_heights, phases);
        Rat point(0);
        for (const auto& [lab, v] : full.per_point)
          if (lab == cond.label) point = v;
        contrib_num *= to_double(point) / to_double(full.total);
      } else {
        // finite good place: stratum mass chi(c) p^{-w a} (or 1 for unramified)
        LocalDensity d = twisted_local_density(datum, tcs, L, fr.a, res, br.orbits, cond.p);
        double full = d.value();
        double massn;
        if (cond.cls < 0)
          massn = 1.0;
        else {
          auto fixed = frobenius_fixed_classes(tcs, datum, cond.p);
          if (std::find(fixed.begin(), fixed.end(), cond.cls) == fixed.end())
            massn = 0.0;
          else {
            const ResidueDatum& rd = res[orbit_of[cond.cls]];
            double chi = 1.0;
            if (rd.kind == ResidueKind::GeometricallyNontrivial)
              chi = 0.0;
            else if (rd.kind == ResidueKind::AlgebraicCharacter) {
              auto v = rd.at_prime(cond.p);
              chi = (v && *v == Rat(1, 2)) ? -1.0 : 1.0;
            }
            massn = chi * std::pow((double)cond.p,
                                   -to_double(L.weight.value[cond.cls] * fr.a));
          }
        }
        contrib_num *= massn / full;
      }
    }
    num += contrib_num;
    den += contrib_den;
  }
  double p = num / den;
  // twisted local factors are dominated by the plain ones (|chi| <= 1), so
  // the predicted proportion must be a genuine probability
  if (p < -1e-9 || p > 1 + 1e-9)
    throw std::runtime_error("conditional probability escaped [0,1]");
  return std::min(1.0, std::max(0.0, p));
}

UnbalancedReport unbalanced_report(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                   const OrbifoldLineBundle& L, const FujitaReport& fr,
                                   const std::vector<int>& lift_gamma_gens,
                                   const std::vector<int>& lift_values) {
  if (fr.balanced) throw precondition_error("bundle is balanced; no Iitaka decomposition");
  const FiniteGroup& G = *datum.G;
  UnbalancedReport rep;
  rep.M = fr.iitaka_kernel;
  rep.iitaka_group = fr.iitaka_group;
  rep.base_b = fr.b;
  // |(G/M)(k)|: cosets fixed by the plain Galois action
  int fixed = 0;
  for (int q = 0; q < fr.iitaka_group->order(); ++q) {
    // pick any coset representative
    int repg = -1;
    for (int g = 0; g < G.order(); ++g)
      if (fr.iitaka_proj[g] == q) {
        repg = g;
        break;
      }
    bool fix = true;
    for (int s = 0; s < datum.gamma->order() && fix; ++s)
      if (fr.iitaka_proj[datum.action[s][repg]] != q) fix = false;
    if (fix) ++fixed;
  }
  rep.fiber_weight = Rat(1) / Rat(fixed);

  if (!lift_gamma_gens.empty()) {
    GaloisDatum fd = inner_twist_datum(rep.M, lift_gamma_gens, lift_values, datum);
    TwistedClassSet ftcs = twisted_classes(fd);
    WeightFunction fw = restrict_weight(L.weight, tcs, G, rep.M, ftcs);
    // restricted character: chi composed with the inclusion
    Character fchi;
    fchi.val.resize(rep.M.group->order());
    for (int x = 0; x < rep.M.group->order(); ++x) fchi.val[x] = L.chi.val[rep.M.to_parent[x]];
    std::vector<int> fsupport;
    for (int c = 0; c < ftcs.count(); ++c)
      if (c != ftcs.identity_class) fsupport.push_back(c);
    OrbifoldLineBundle fl = validate_bundle(fchi, fw, ftcs, fd, fsupport);
    FujitaReport ffr = fujita(fl, ftcs, fd);
    rep.breaking_fiber = ffr.b > fr.b;
    rep.fiber_datum = std::move(fd);
    rep.fiber_tcs = std::move(ftcs);
    rep.fiber_bundle = std::move(fl);
    rep.fiber_fujita = std::move(ffr);
  }
  return rep;
}

Rat groupoid_factor_for_embedding(const FiniteGroup& G) {
  if (!G.has_perms()) throw std::runtime_error("no permutation presentation");
  int deg = G.degree();
  // normalizer and centralizer of G inside S_deg: enumerate S_deg only for
  // small degree; otherwise use the standard closure trick
  if (deg > 8) throw std::runtime_error("groupoid factor only for degree <= 8");
  std::vector<Perm> sn_gens;
  {
    // transposition and n-cycle generate S_n
    Perm t(deg), c(deg);
    if (deg >= 2) {
      std::swap(t.img[0], t.img[1]);
      for (int i = 0; i < deg; ++i) c.img[i] = (i + 1) % deg;
    }
    sn_gens = {t, c};
  }
  FiniteGroup Sn = FiniteGroup::from_generators(sn_gens, 50000);
  std::set<std::vector<int>> gset;
  for (int i = 0; i < G.order(); ++i) gset.insert(G.perm(i).img);
  long long nsize = 0, csize = 0;
  for (int s = 0; s < Sn.order(); ++s) {
    const Perm& p = Sn.perm(s);
    Perm pi = p.inverse();
    bool normal = true, central = true;
    for (int i = 0; i < G.order(); ++i) {
      Perm conj = p.compose(G.perm(i)).compose(pi);
      if (!gset.count(conj.img)) {
        normal = false;
        central = false;
        break;
      }
      if (!(conj == G.perm(i))) central = false;
    }
    if (normal) ++nsize;
    if (central) ++csize;
  }
  return make_rat(nsize) / (make_rat(csize) * Rat(G.order()));
}

} // namespace malle
