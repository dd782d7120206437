#include "malle/tamagawa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace malle {

void LocalDensity::add(const Rat& exponent, const Rat& coeff) {
  for (auto& [e, c] : terms)
    if (e == exponent) {
      c += coeff;
      return;
    }
  terms.push_back({exponent, coeff});
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::optional<Rat> LocalDensity::exact() const {
  Rat out(0);
  for (const auto& [e, c] : terms) {
    if (!is_integer(e)) return std::nullopt;
    out += c * rat_pow(make_rat(q), -to_long(e.get_num()));
  }
  return out;
}

double LocalDensity::value() const {
  double out = 0;
  for (const auto& [e, c] : terms) out += to_double(c) * std::pow((double)q, -to_double(e));
  return out;
}

bool LocalDensity::same_terms(const LocalDensity& o) const {
  auto clean = [](const LocalDensity& d) {
    std::vector<std::pair<Rat, Rat>> t;
    for (const auto& p : d.terms)
      if (p.second != 0) t.push_back(p);
    return t;
  };
  return clean(*this) == clean(o);
}

LocalDensity good_local_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                const OrbifoldLineBundle& L, const Rat& a, long long q) {
  if (std::gcd(q, (long long)datum.G->order()) != 1)
    throw std::runtime_error("bad place q=" + std::to_string(q) + " (divides |G|)");
  LocalDensity d;
  d.q = q;
  d.provenance = "formula";
  for (int c : frobenius_fixed_classes(tcs, datum, q)) d.add(L.weight.value[c] * a, Rat(1));
  return d;
}

LocalDensity integral_partial_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                      const std::vector<int>& minimal_classes, long long q) {
  LocalDensity d;
  d.q = q;
  d.provenance = "formula";
  d.add(Rat(0), Rat(1));
  auto fixed = frobenius_fixed_classes(tcs, datum, q);
  long long cnt = 0;
  for (int c : minimal_classes)
    if (std::find(fixed.begin(), fixed.end(), c) != fixed.end()) ++cnt;
  if (cnt) d.add(Rat(1), make_rat(cnt));
  return d;
}

std::vector<RealPoint> real_points(const GaloisDatum& datum, int place) {
  const auto& pl = datum.arch.at(place);
  const FiniteGroup& G = *datum.G;
  if (!pl.real) {
    RealPoint pt;
    pt.label = "C-place";
    pt.rep = G.id();
    pt.members = {G.id()};
    return {pt};
  }
  int tau = pl.conj_elem;
  std::vector<int> cocycles;
  for (int g = 0; g < G.order(); ++g)
    if (G.mul(g, datum.action[tau][g]) == G.id()) cocycles.push_back(g);
  // equivalence g ~ h g action(tau)(h)^-1
  std::vector<int> cls(G.order(), -1);
  std::vector<RealPoint> out;
  for (int g : cocycles) {
    if (cls[g] >= 0) continue;
    RealPoint pt;
    pt.rep = g;
    for (int h = 0; h < G.order(); ++h) {
      int img = G.mul(G.mul(h, g), G.inv(datum.action[tau][h]));
      if (cls[img] < 0) {
        cls[img] = (int)out.size();
        pt.members.push_back(img);
      }
    }
    std::sort(pt.members.begin(), pt.members.end());
    pt.rep = pt.members[0];
    if (G.has_perms()) {
      // signature label R^f C^t from the fixed points of the representative
      const Perm& p = G.perm(pt.rep);
      int f = p.num_fixed_points();
      int t = (p.degree() - f) / 2;
      std::string lab;
      if (f) lab += "R" + std::to_string(f);
      if (t) lab += "C" + std::to_string(t);
      if (lab.empty()) lab = "R0";
      pt.label = lab;
    } else {
      pt.label = "point" + std::to_string(out.size());
    }
    out.push_back(std::move(pt));
  }
  return out;
}

ArchDensity archimedean_density(const GaloisDatum& datum, int place, const Rat& a,
                                const std::map<std::string, Rat>& arch_heights) {
  const FiniteGroup& G = *datum.G;
  ArchDensity out;
  out.total = Rat(0);
  if (!datum.arch.at(place).real) {
    Rat v = Rat(1) / Rat(G.order());
    out.total = v;
    out.per_point.push_back({"C-place", v});
    return out;
  }
  for (const auto& pt : real_points(datum, place)) {
    Rat H(1);
    auto it = arch_heights.find(pt.label);
    if (it != arch_heights.end()) H = it->second;
    Rat hpow;
    if (H == 1)
      hpow = Rat(1);
    else if (is_integer(a))
      hpow = rat_pow(H, -to_long(a.get_num()));
    else
      throw std::runtime_error("non-integral exponent with non-unit archimedean height");
    Rat v = Rat((long)pt.members.size()) * hpow / Rat(G.order());
    out.per_point.push_back({pt.label, v});
    out.total += v;
  }
  return out;
}

LocalDensity twisted_local_density(const GaloisDatum& datum, const TwistedClassSet& tcs,
                                   const OrbifoldLineBundle& L, const Rat& a,
                                   const std::vector<ResidueDatum>& residues,
                                   const std::vector<std::vector<int>>& orbits, long long q) {
  std::vector<int> orbit_of(tcs.count(), -1);
  for (size_t i = 0; i < orbits.size(); ++i)
    for (int c : orbits[i]) orbit_of[c] = (int)i;
  LocalDensity d;
  d.q = q;
  d.provenance = "formula";
  for (int c : frobenius_fixed_classes(tcs, datum, q)) {
    if (c == tcs.identity_class) {
      d.add(Rat(0), Rat(1));
      continue;
    }
    const ResidueDatum& rd = residues.at(orbit_of[c]);
    if (rd.kind == ResidueKind::GeometricallyNontrivial) continue; // chi = 0
    Rat theta(0);
    if (rd.kind == ResidueKind::AlgebraicCharacter) {
      auto v = rd.at_prime(q);
      if (!v)
        throw std::runtime_error("residue character undefined at q=" + std::to_string(q));
      theta = *v;
    }
    Rat coeff;
    if (theta == 0)
      coeff = Rat(1);
    else if (theta == Rat(1, 2))
      coeff = Rat(-1);
    else
      throw std::runtime_error("non-quadratic residue character in numeric density");
    d.add(L.weight.value[c] * a, coeff);
  }
  return d;
}

Rat convergence_factor(const GaloisDatum& datum, const TwistedClassSet& tcs,
                       const std::vector<int>& minimal_classes, int b, ConvergenceMode mode,
                       long long q) {
  if (!datum.is_good_prime(q))
    throw std::runtime_error("bad place for convergence factor (convention: 1)");
  Rat inv_q = Rat(1) / make_rat(q);
  if (mode == ConvergenceMode::Zeta) return rat_pow(1 - inv_q, b);
  // artin: det(1 - q^{-1} P) with P the Frobenius permutation on M(L)
  int s = datum.frobenius(q);
  int m = (int)minimal_classes.size();
  std::vector<int> pos(tcs.count(), -1);
  for (int i = 0; i < m; ++i) pos[minimal_classes[i]] = i;
  // det over Q via fraction-free expansion on the permutation structure:
  // product over cycles of (1 - q^{-len})
  std::vector<char> seen(m, 0);
  Rat det(1);
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = pos[tcs.gamma_action[s][minimal_classes[j]]];
      if (j < 0) throw std::runtime_error("minimal classes not Frobenius stable");
      ++len;
    }
    det *= 1 - rat_pow(inv_q, len);
  }
  return det;
}

LocalDensity brute_force_local(const GaloisDatum& datum, const TwistedClassSet& tcs,
                               const OrbifoldLineBundle& L, const Rat& a, long long q) {
  const FiniteGroup& G = *datum.G;
  if (G.order() % q == 0) throw std::runtime_error("q must be coprime to |G|");
  int s = datum.frobenius(q);
  LocalDensity d;
  d.q = q;
  d.provenance = "brute-force";
  Rat invG = Rat(1) / Rat(G.order());
  for (int gamma = 0; gamma < G.order(); ++gamma) {
    int tg = datum.twisted_act(s, gamma); // Frobenius on G(-1)
    for (int g = 0; g < G.order(); ++g)
      if (G.conj(g, tg) == gamma) d.add(L.weight.value[tcs.classes.class_of[gamma]] * a, invG);
  }
  return d;
}

namespace {

long long val_p(Rat x, long long p, Rat& unit) {
  long long v = 0;
  Int num = x.get_num(), den = x.get_den();
  Int P = make_int(p);
  while (num % P == 0) {
    num /= P;
    ++v;
  }
  while (den % P == 0) {
    den /= P;
    --v;
  }
  unit = Rat(num) / Rat(den);
  return v;
}

// Legendre symbol indicator: 0 if u is a QR mod p, 1 otherwise (u coprime p)
long long leg_ind(const Rat& u, long long p) {
  Int num = u.get_num(), den = u.get_den();
  Int P = make_int(p);
  Int r = (num % P) * [&] {
    // inverse of den mod p
    Int d = den % P;
    if (d < 0) d += P;
    long long dl = to_long(d);
    return make_int(inverse_mod(dl, p));
  }() % P;
  if (r < 0) r += P;
  long long rl = to_long(r);
  // Euler criterion
  long long e = (p - 1) / 2, base = rl % p, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 0 : 1;
}

long long mod8(const Rat& u) {
  Int num = u.get_num(), den = u.get_den();
  Int r = (num % 8) * make_int(inverse_mod(to_long(((den % 8) + 8) % 8), 8)) % 8;
  if (r < 0) r += 8;
  return to_long(r);
}

} // namespace

Rat hilbert_symbol(const Rat& a, const Rat& b, long long v) {
  if (a == 0 || b == 0) throw std::runtime_error("hilbert symbol needs nonzero arguments");
  if (v == 0) return (a < 0 && b < 0) ? Rat(1, 2) : Rat(0);
  if (v < 2) throw std::runtime_error("place must be a prime or 0 (infinity)");
  for (long long q = 2; q * q <= v; ++q)
    if (v % q == 0) throw std::runtime_error("place must be a prime or 0 (infinity)");
  auto par = [](long long x) { return ((x % 2) + 2) % 2; };
  if (v == 2) {
    Rat u, w;
    long long al = val_p(a, 2, u), bl = val_p(b, 2, w);
    long long um = mod8(u), wm = mod8(w);
    long long eps_u = ((um - 1) / 2) % 2, eps_w = ((wm - 1) / 2) % 2;
    long long om_u = (um * um - 1) / 8 % 2, om_w = (wm * wm - 1) / 8 % 2;
    long long t = par(eps_u * eps_w + par(al) * om_w + par(bl) * om_u);
    return t ? Rat(1, 2) : Rat(0);
  }
  Rat u, w;
  long long al = val_p(a, v, u), bl = val_p(b, v, w);
  long long eps = ((v - 1) / 2) % 2;
  long long t = par(al) * par(bl) * eps;
  if (par(bl)) t += leg_ind(u, v);
  if (par(al)) t += leg_ind(w, v);
  return par(t) ? Rat(1, 2) : Rat(0);
}

std::vector<Rat> arch_phases(const GaloisDatum& datum, int place,
                             const MarkedCentralExtension& mce) {
  const FiniteGroup& G = *datum.G;
  const FiniteGroup& E = *mce.ext.E;
  const auto& pl = datum.arch.at(place);
  std::vector<Rat> phases(G.order(), Rat(0));
  if (!pl.real) return phases;
  // gamma' element covering complex conjugation: inverts roots of unity
  long long eE = E.exponent();
  int tauext = -1;
  for (int x = 0; x < mce.gamma_ext->order(); ++x)
    if (mce.gamma_ext_to_base[x] == pl.conj_elem &&
        (mce.cyc_ext[x] % eE + eE) % eE == (eE == 1 ? 1 % eE : eE - 1))
      tauext = x;
  if (tauext < 0 && eE <= 2) {
    for (int x = 0; x < mce.gamma_ext->order(); ++x)
      if (mce.gamma_ext_to_base[x] == pl.conj_elem) tauext = x;
  }
  if (tauext < 0) throw std::runtime_error("no conjugation lift in gamma_ext");
  for (int g = 0; g < G.order(); ++g) {
    if (G.mul(g, datum.action[pl.conj_elem][g]) != G.id()) continue; // not a cocycle
    bool lifts = false;
    for (int eps = 0; eps < E.order() && !lifts; ++eps) {
      if (mce.ext.proj[eps] != g) continue;
      if (E.mul(eps, mce.action[tauext][eps]) == E.id()) lifts = true;
    }
    phases[g] = lifts ? Rat(0) : Rat(1, 2);
  }
  return phases;
}

std::vector<Rat> arch_phases_algebraic(const GaloisDatum& datum, int place,
                                       const AlgebraicBrauer& alg, int gen) {
  const FiniteGroup& G = *datum.G;
  const auto& pl = datum.arch.at(place);
  std::vector<Rat> phases(G.order(), Rat(0));
  if (!pl.real) return phases;
  int tau = pl.conj_elem;
  // invariant of the cup product of F with a real cocycle g: the character
  // part of F(tau) evaluated at g (2-torsion since g^tau g = e)
  const auto& Ftau = alg.cocycles[gen][tau];
  for (int g = 0; g < G.order(); ++g) {
    if (G.mul(g, datum.action[tau][g]) != G.id()) continue;
    Rat v(0);
    for (size_t i = 0; i < alg.lattice.basis_chi.size(); ++i) {
      if (Ftau[i] == 0) continue;
      v += Rat(Ftau[i]) * alg.lattice.basis_chi[i].val[g];
    }
    v = mod1(v);
    if (v != 0 && v != Rat(1, 2))
      throw std::runtime_error("archimedean invariant must be 2-torsion");
    phases[g] = v;
  }
  return phases;
}

ArchDensity archimedean_from_phases(const GaloisDatum& datum, int place, const Rat& a,
                                    const std::map<std::string, Rat>& arch_heights,
                                    const std::vector<Rat>& phases) {
  const FiniteGroup& G = *datum.G;
  ArchDensity out;
  out.total = Rat(0);
  if (!datum.arch.at(place).real) {
    Rat v = Rat(1) / Rat(G.order());
    out.total = v;
    out.per_point.push_back({"C-place", v});
    return out;
  }
  for (const auto& pt : real_points(datum, place)) {
    Rat H(1);
    auto it = arch_heights.find(pt.label);
    if (it != arch_heights.end()) H = it->second;
    Rat hpow;
    if (H == 1)
      hpow = Rat(1);
    else if (is_integer(a))
      hpow = rat_pow(H, -to_long(a.get_num()));
    else
      throw std::runtime_error("non-integral exponent with non-unit archimedean height");
    Rat v(0);
    for (int g : pt.members) {
      Rat ph = mod1(phases[g]);
      Rat sign;
      if (ph == 0)
        sign = Rat(1);
      else if (ph == Rat(1, 2))
        sign = Rat(-1);
      else
        throw std::runtime_error("non-quadratic archimedean phase");
      v += sign * hpow / Rat(G.order());
    }
    out.per_point.push_back({pt.label, v});
    out.total += v;
  }
  return out;
}

ArchDensity archimedean_twisted(const GaloisDatum& datum, int place, const Rat& a,
                                const std::map<std::string, Rat>& arch_heights,
                                const MarkedCentralExtension& mce) {
  return archimedean_from_phases(datum, place, a, arch_heights, arch_phases(datum, place, mce));
}

} // namespace malle
