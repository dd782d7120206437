#include "malle/galois.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace malle {

long long inverse_mod(long long a, long long m) {
  if (m == 1) return 0;
  long long t0 = 0, t1 = 1, r0 = m, r1 = ((a % m) + m) % m;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::swap(r0 -= q * r1, r1);
    std::swap(t0 -= q * t1, t1);
  }
  if (r0 != 1) throw std::runtime_error("not invertible mod " + std::to_string(m));
  return ((t0 % m) + m) % m;
}

int GaloisDatum::twisted_act(int sigma, int g) const {
  long long e = G->exponent();
  long long u = inverse_mod(cyc[sigma], e);
  return G->pow(action[sigma][g], u);
}

bool GaloisDatum::is_good_prime(long long p) const {
  return p % conductor != 0 && std::gcd(p, conductor) == 1 && G->order() % p != 0;
}

int GaloisDatum::frobenius(long long p) const {
  long long r = p % conductor;
  if (r < 0) r += conductor;
  if (conductor == 1) return gamma->id();
  if (std::gcd(r, conductor) != 1)
    throw std::runtime_error("bad place p=" + std::to_string(p) +
                             " (divides conductor; supply an override table)");
  int s = frob_table[r];
  if (s < 0) throw std::runtime_error("frobenius table missing residue " + std::to_string(r));
  return s;
}

void GaloisDatum::validate() const {
  int m = gamma->order();
  long long e = G->exponent();
  if ((int)action.size() != m || (int)cyc.size() != m)
    throw std::runtime_error("datum tables must cover all of gamma");
  for (int s = 0; s < m; ++s) {
    if (std::gcd(cyc[s], e) != 1)
      throw std::runtime_error("cyc value not coprime to exponent");
    // automorphism check
    const std::vector<int>& a = action[s];
    std::vector<char> hit(G->order(), 0);
    for (int v : a) {
      if (v < 0 || v >= G->order() || hit[v]) throw std::runtime_error("action not bijective");
      hit[v] = 1;
    }
    for (int x = 0; x < G->order(); ++x)
      for (int y = 0; y < G->order(); ++y)
        if (a[G->mul(x, y)] != G->mul(a[x], a[y]))
          throw std::runtime_error("action image is not an automorphism");
  }
  // homomorphism properties
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) {
      int st = gamma->mul(s, t);
      if ((cyc[s] * cyc[t] - cyc[st]) % e != 0)
        throw std::runtime_error("cyc is not a homomorphism");
      for (int x = 0; x < G->order(); ++x)
        if (action[st][x] != action[s][action[t][x]])
          throw std::runtime_error("action is not a homomorphism");
    }
  if (action[gamma->id()] != [&] {
        std::vector<int> idv(G->order());
        std::iota(idv.begin(), idv.end(), 0);
        return idv;
      }())
    throw std::runtime_error("identity of gamma must act trivially");
  for (const auto& pl : arch)
    if (pl.real) {
      int t = pl.conj_elem;
      if (t < 0 || t >= m) throw std::runtime_error("bad conjugation element");
      if (gamma->mul(t, t) != gamma->id())
        throw std::runtime_error("complex conjugation must have order <= 2");
    }
}

namespace {

std::shared_ptr<FiniteGroup> unit_group_mod(long long e) {
  std::vector<long long> units;
  for (long long u = 1; u <= e; ++u)
    if (std::gcd(u, e) == 1) units.push_back(u % e);
  if (e == 1) units = {0}; // trivial group
  int m = (int)units.size();
  std::vector<int> table((size_t)m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long long v = e == 1 ? 0 : (units[i] * units[j]) % e;
      int k = (int)(std::find(units.begin(), units.end(), v) - units.begin());
      table[(size_t)i * m + j] = k;
    }
  return std::make_shared<FiniteGroup>(FiniteGroup::from_cayley(std::move(table), m));
}

} // namespace

GaloisDatum constant_datum_over_Q(std::shared_ptr<FiniteGroup> G) {
  long long e = G->exponent();
  GaloisDatum d;
  d.G = std::move(G);
  d.gamma = unit_group_mod(e);
  std::vector<long long> units;
  for (long long u = 1; u <= e; ++u)
    if (std::gcd(u, e) == 1) units.push_back(u % e);
  if (e == 1) units = {1};
  int m = d.gamma->order();
  std::vector<int> ident(d.G->order());
  std::iota(ident.begin(), ident.end(), 0);
  d.action.assign(m, ident);
  d.cyc.resize(m);
  for (int i = 0; i < m; ++i) d.cyc[i] = e == 1 ? 1 : units[i];
  d.conductor = e;
  d.frob_table.assign(e, -1);
  for (int i = 0; i < m; ++i) d.frob_table[units[i] % e] = i;
  if (e == 1) d.frob_table = {0};
  // one real place; complex conjugation = -1 mod e
  ArchPlace inf;
  inf.real = true;
  long long minus1 = e == 1 ? 1 : (e - 1) % e;
  inf.conj_elem = (int)(std::find(units.begin(), units.end(), minus1 == 0 ? 1 : minus1) -
                        units.begin());
  if (inf.conj_elem >= m) inf.conj_elem = d.gamma->id();
  d.arch = {inf};
  d.validate();
  return d;
}

namespace {

// Extends data given on generators to all of gamma via BFS words; verifies
// the result is a homomorphism.
template <typename T, typename Mul>
std::vector<T> extend_over_gamma(const FiniteGroup& gamma, const std::vector<int>& gens,
                                 const std::vector<T>& gen_values, const T& id_value, Mul mul,
                                 const char* what) {
  int m = gamma.order();
  std::vector<T> val(m);
  std::vector<char> have(m, 0);
  val[gamma.id()] = id_value;
  have[gamma.id()] = 1;
  std::vector<int> frontier{gamma.id()};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        int y = gamma.mul(gens[gi], x);
        if (!have[y]) {
          val[y] = mul(gen_values[gi], val[x]);
          have[y] = 1;
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  for (int x = 0; x < m; ++x)
    if (!have[x]) throw std::runtime_error(std::string(what) + ": generators do not generate gamma");
  return val;
}

} // namespace

GaloisDatum explicit_datum(std::shared_ptr<FiniteGroup> G, std::shared_ptr<FiniteGroup> gamma,
                           const std::vector<int>& gamma_gens,
                           const std::vector<std::vector<int>>& gen_action,
                           const std::vector<long long>& gen_cyc, long long conductor,
                           const std::vector<int>& frob_table, std::vector<ArchPlace> arch) {
  GaloisDatum d;
  d.G = std::move(G);
  d.gamma = std::move(gamma);
  long long e = d.G->exponent();
  std::vector<int> ident(d.G->order());
  std::iota(ident.begin(), ident.end(), 0);
  auto compose = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  };
  d.action = extend_over_gamma(*d.gamma, gamma_gens, gen_action, ident, compose, "action");
  d.cyc = extend_over_gamma(*d.gamma, gamma_gens, gen_cyc, 1LL,
                            [&](long long a, long long b) { return (a * b) % e; }, "cyc");
  d.conductor = conductor;
  d.frob_table = frob_table;
  d.arch = std::move(arch);
  d.validate();
  return d;
}

TwistedClassSet twisted_classes(const GaloisDatum& datum) {
  const FiniteGroup& G = *datum.G;
  TwistedClassSet t;
  t.classes = G.classes();
  t.identity_class = t.classes.identity_class;
  int m = datum.gamma->order();
  int nc = t.classes.count();
  t.gamma_action.assign(m, std::vector<int>(nc, -1));
  for (int s = 0; s < m; ++s) {
    for (int c = 0; c < nc; ++c) {
      int img = t.classes.class_of[datum.twisted_act(s, t.classes.rep(c))];
      // descent: every member lands in the same class
      for (int x : t.classes.classes[c])
        if (t.classes.class_of[datum.twisted_act(s, x)] != img)
          throw std::runtime_error("twisted action does not descend to classes");
      t.gamma_action[s][c] = img;
    }
    std::vector<char> hit(nc, 0);
    for (int v : t.gamma_action[s]) {
      if (hit[v]) throw std::runtime_error("class action not bijective");
      hit[v] = 1;
    }
  }
  // genuine action
  for (int s = 0; s < m; ++s)
    for (int u = 0; u < m; ++u) {
      int su = datum.gamma->mul(s, u);
      for (int c = 0; c < nc; ++c)
        if (t.gamma_action[su][c] != t.gamma_action[s][t.gamma_action[u][c]])
          throw std::runtime_error("class action is not a gamma action");
    }
  if (t.gamma_action[datum.gamma->id()] !=
      [&] {
        std::vector<int> idv(nc);
        std::iota(idv.begin(), idv.end(), 0);
        return idv;
      }())
    throw std::runtime_error("identity must fix all classes");
  for (int s = 0; s < m; ++s)
    if (t.gamma_action[s][t.identity_class] != t.identity_class)
      throw std::runtime_error("identity class must be gamma-fixed");
  return t;
}

std::vector<std::vector<int>> TwistedClassSet::orbits() const {
  int nc = count();
  std::vector<char> seen(nc, 0);
  std::vector<std::vector<int>> out;
  for (int c = 0; c < nc; ++c) {
    if (seen[c]) continue;
    std::vector<int> orb;
    std::vector<int> stack{c};
    seen[c] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      orb.push_back(x);
      for (const auto& act : gamma_action) {
        int y = act[x];
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

std::vector<int> TwistedClassSet::orbit_of(int cls) const {
  for (const auto& orb : orbits())
    if (std::find(orb.begin(), orb.end(), cls) != orb.end()) return orb;
  throw std::runtime_error("class index out of range");
}

std::vector<int> TwistedClassSet::stabilizer(int cls) const {
  std::vector<int> st;
  for (int s = 0; s < (int)gamma_action.size(); ++s)
    if (gamma_action[s][cls] == cls) st.push_back(s);
  return st;
}

int TwistedClassSet::nontrivial_orbit_count() const {
  int k = 0;
  for (const auto& orb : orbits())
    if (std::find(orb.begin(), orb.end(), identity_class) == orb.end()) ++k;
  return k;
}

std::vector<int> frobenius_fixed_classes(const TwistedClassSet& tcs, const GaloisDatum& datum,
                                         long long p) {
  int s = datum.frobenius(p);
  std::vector<int> fixed;
  for (int c = 0; c < tcs.count(); ++c)
    if (tcs.gamma_action[s][c] == c) fixed.push_back(c);
  return fixed;
}

Character char_galois_act(const GaloisDatum& datum, int sigma, const Character& chi) {
  const FiniteGroup& G = *datum.G;
  int sinv = datum.gamma->inv(sigma);
  Character out;
  out.val.resize(G.order());
  for (int g = 0; g < G.order(); ++g)
    out.val[g] = mod1(make_rat(datum.cyc[sigma]) * chi.val[datum.action[sinv][g]]);
  return out;
}

RationalCharacterGroup rational_characters(const GaloisDatum& datum) {
  CharacterGroup cg = datum.G->one_dim_characters();
  RationalCharacterGroup out;
  for (const auto& chi : cg.all) {
    bool fixed = true;
    for (int s = 0; s < datum.gamma->order() && fixed; ++s)
      if (!(char_galois_act(datum, s, chi) == chi)) fixed = false;
    if (fixed) out.chars.push_back(chi);
  }
  return out;
}

GaloisDatum inner_twist_datum(const FiniteGroup::Subgroup& M, const std::vector<int>& gamma_gens,
                              const std::vector<int>& lift, const GaloisDatum& datum) {
  const FiniteGroup& G = *datum.G;
  const FiniteGroup& Msub = *M.group;
  if (gamma_gens.size() != lift.size())
    throw std::runtime_error("one lift element per gamma generator required");
  int mm = Msub.order();

  std::vector<std::vector<int>> gen_auto;
  for (size_t i = 0; i < gamma_gens.size(); ++i) {
    int s = gamma_gens[i], l = lift[i];
    std::vector<int> a(mm);
    for (int x = 0; x < mm; ++x) {
      int gx = M.to_parent[x];
      int y = G.conj(l, datum.act(s, gx));
      if (M.from_parent[y] < 0)
        throw std::runtime_error("lift does not normalize the subgroup");
      a[x] = M.from_parent[y];
    }
    gen_auto.push_back(std::move(a));
  }

  GaloisDatum d;
  d.G = M.group;
  d.gamma = datum.gamma;
  std::vector<int> ident(mm);
  std::iota(ident.begin(), ident.end(), 0);
  auto compose = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  };
  d.action = extend_over_gamma(*d.gamma, gamma_gens, gen_auto, ident, compose, "twisted action");
  long long em = Msub.exponent();
  d.cyc.resize(datum.gamma->order());
  for (int s = 0; s < datum.gamma->order(); ++s) d.cyc[s] = ((datum.cyc[s] % em) + em) % em;
  d.conductor = datum.conductor;
  d.frob_table = datum.frob_table;
  d.arch = datum.arch;
  d.validate(); // also catches inconsistency on gamma relations
  return d;
}

} // namespace malle
