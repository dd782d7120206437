#include "malle/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "malle/intmat.hpp"

namespace malle {

FiniteGroup FiniteGroup::from_generators(const std::vector<Perm>& gens_in, int size_cap) {
  int deg = 1;
  for (const auto& g : gens_in) deg = std::max(deg, g.degree());
  std::vector<Perm> gens;
  for (const auto& g : gens_in) gens.push_back(g.extended(deg));
  for (const auto& g : gens)
    if (g.degree() != deg) throw std::runtime_error("generator degree mismatch");

  std::map<std::vector<int>, int> index;
  std::vector<Perm> elems;
  auto push = [&](const Perm& p) -> bool {
    auto it = index.find(p.img);
    if (it != index.end()) return false;
    if ((int)elems.size() >= size_cap)
      throw std::runtime_error("group closure exceeds size cap (" + std::to_string(size_cap) + ")");
    index.emplace(p.img, (int)elems.size());
    elems.push_back(p);
    return true;
  };
  push(Perm::identity(deg));
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int i : frontier)
      for (const auto& g : gens) {
        Perm p = g.compose(elems[i]);
        if (push(p)) next.push_back((int)elems.size() - 1);
      }
    frontier = std::move(next);
  }

  std::sort(elems.begin(), elems.end());
  FiniteGroup G;
  G.n_ = (int)elems.size();
  G.perms_ = elems;
  std::map<std::vector<int>, int> pos;
  for (int i = 0; i < G.n_; ++i) pos.emplace(elems[i].img, i);
  G.mul_.assign((size_t)G.n_ * G.n_, 0);
  for (int a = 0; a < G.n_; ++a)
    for (int b = 0; b < G.n_; ++b) {
      Perm p = elems[a].compose(elems[b]);
      auto it = pos.find(p.img);
      if (it == pos.end()) throw std::runtime_error("closure bug");
      G.mul_[(size_t)a * G.n_ + b] = it->second;
    }
  G.finalize();
  return G;
}

FiniteGroup FiniteGroup::from_cayley(std::vector<int> table, int n) {
  if ((int)table.size() != n * n) throw std::runtime_error("cayley table size mismatch");
  FiniteGroup G;
  G.n_ = n;
  G.mul_ = std::move(table);
  G.finalize();
  return G;
}

void FiniteGroup::finalize() {
  // latin square + identity
  for (int a = 0; a < n_; ++a) {
    std::vector<char> seen_r(n_, 0), seen_c(n_, 0);
    for (int b = 0; b < n_; ++b) {
      int r = mul(a, b), c = mul(b, a);
      if (r < 0 || r >= n_ || c < 0 || c >= n_) throw std::runtime_error("cayley entry out of range");
      if (seen_r[r] || seen_c[c]) throw std::runtime_error("cayley table not a latin square");
      seen_r[r] = seen_c[c] = 1;
    }
  }
  e_ = -1;
  for (int a = 0; a < n_; ++a) {
    bool ident = true;
    for (int b = 0; b < n_ && ident; ++b)
      if (mul(a, b) != b || mul(b, a) != b) ident = false;
    if (ident) {
      e_ = a;
      break;
    }
  }
  if (e_ < 0) throw std::runtime_error("no identity element");

  // associativity: exhaustive for small groups, sampled above
  if (n_ <= 200) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw std::runtime_error("cayley table not associative");
  } else {
    std::mt19937 rng(12345);
    for (int t = 0; t < 20000; ++t) {
      int a = rng() % n_, b = rng() % n_, c = rng() % n_;
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        throw std::runtime_error("cayley table not associative");
    }
  }

  inv_.assign(n_, -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == e_) {
        inv_[a] = b;
        break;
      }
  for (int a = 0; a < n_; ++a)
    if (inv_[a] < 0) throw std::runtime_error("missing inverse");

  order_.assign(n_, 0);
  exponent_ = 1;
  for (int a = 0; a < n_; ++a) {
    int k = 1, x = a;
    while (x != e_) {
      x = mul(x, a);
      ++k;
    }
    order_[a] = k;
    exponent_ = std::lcm(exponent_, (long long)k);
    if (n_ % k != 0) throw std::runtime_error("element order does not divide group order");
  }
}

int FiniteGroup::pow(int a, long long k) const {
  int m = order_[a];
  long long r = k % m;
  if (r < 0) r += m;
  int acc = e_, base = a;
  while (r) {
    if (r & 1) acc = mul(acc, base);
    base = mul(base, base);
    r >>= 1;
  }
  return acc;
}

std::string FiniteGroup::element_name(int a) const {
  if (has_perms()) return perms_[a].cycle_string();
  return "g" + std::to_string(a);
}

int FiniteGroup::index_of(const Perm& p) const {
  if (!has_perms()) throw std::runtime_error("group has no permutation presentation");
  Perm q = p.degree() == degree() ? p : p.extended(degree());
  for (int i = 0; i < n_; ++i)
    if (perms_[i] == q) return i;
  throw std::runtime_error("permutation " + p.cycle_string() + " not in group");
}

const ClassPartition& FiniteGroup::classes() const {
  if (classes_) return *classes_;
  ClassPartition cp;
  cp.class_of.assign(n_, -1);
  for (int x = 0; x < n_; ++x) {
    if (cp.class_of[x] >= 0) continue;
    // x is the least member of its class (orbits scanned in index order)
    std::vector<int> cls;
    std::vector<int> stack{x};
    cp.class_of[x] = (int)cp.classes.size();
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      cls.push_back(y);
      for (int g = 0; g < n_; ++g) {
        int z = conj(g, y);
        if (cp.class_of[z] < 0) {
          cp.class_of[z] = cp.class_of[x];
          stack.push_back(z);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    cp.classes.push_back(std::move(cls));
  }
  cp.identity_class = cp.class_of[e_];
  classes_ = std::move(cp);
  return *classes_;
}

std::vector<int> FiniteGroup::center() const {
  std::vector<int> z;
  for (int a = 0; a < n_; ++a) {
    bool c = true;
    for (int b = 0; b < n_ && c; ++b)
      if (mul(a, b) != mul(b, a)) c = false;
    if (c) z.push_back(a);
  }
  return z;
}

std::vector<int> FiniteGroup::centralizer(int g) const {
  std::vector<int> c;
  for (int a = 0; a < n_; ++a)
    if (mul(a, g) == mul(g, a)) c.push_back(a);
  return c;
}

std::vector<int> FiniteGroup::commutator_elements() const {
  std::vector<int> gens;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) gens.push_back(mul(mul(a, b), mul(inv_[a], inv_[b])));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  auto sub = subgroup_generated(gens);
  return sub.to_parent;
}

long long FiniteGroup::m_torsion_count(long long m) const {
  long long c = 0;
  for (int a = 0; a < n_; ++a)
    if (pow(a, m) == e_) ++c;
  return c;
}

FiniteGroup::Subgroup FiniteGroup::subgroup_from_elements(std::vector<int> elems) const {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<int> from(n_, -1);
  for (int i = 0; i < (int)elems.size(); ++i) from[elems[i]] = i;
  int m = (int)elems.size();
  std::vector<int> table((size_t)m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int p = mul(elems[i], elems[j]);
      if (from[p] < 0) throw std::runtime_error("element set not closed under multiplication");
      table[(size_t)i * m + j] = from[p];
    }
  Subgroup s;
  s.group = std::make_shared<FiniteGroup>(FiniteGroup::from_cayley(std::move(table), m));
  if (has_perms()) {
    s.group->perms_.clear();
    for (int i = 0; i < m; ++i) s.group->perms_.push_back(perms_[elems[i]]);
  }
  s.to_parent = std::move(elems);
  s.from_parent = std::move(from);
  return s;
}

FiniteGroup::Subgroup FiniteGroup::subgroup_generated(const std::vector<int>& gens) const {
  std::vector<char> in(n_, 0);
  std::vector<int> elems{e_};
  in[e_] = 1;
  std::vector<int> frontier{e_};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        int y = mul(g, x);
        if (!in[y]) {
          in[y] = 1;
          elems.push_back(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return subgroup_from_elements(elems);
}

bool FiniteGroup::is_normal(const std::vector<int>& elems) const {
  std::vector<char> in(n_, 0);
  for (int x : elems) in[x] = 1;
  for (int g = 0; g < n_; ++g)
    for (int x : elems)
      if (!in[conj(g, x)]) return false;
  return true;
}

FiniteGroup::Quotient FiniteGroup::quotient(const Subgroup& N) const {
  if (!is_normal(N.to_parent)) throw std::runtime_error("subgroup is not normal");
  std::vector<int> coset_of(n_, -1);
  std::vector<int> reps;
  for (int g = 0; g < n_; ++g) {
    if (coset_of[g] >= 0) continue;
    int c = (int)reps.size();
    reps.push_back(g);
    for (int x : N.to_parent) coset_of[mul(g, x)] = c;
  }
  int m = (int)reps.size();
  std::vector<int> table((size_t)m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[(size_t)i * m + j] = coset_of[mul(reps[i], reps[j])];
  Quotient q;
  q.group = std::make_shared<FiniteGroup>(FiniteGroup::from_cayley(std::move(table), m));
  q.proj = std::move(coset_of);
  if ((long long)m * N.order() != n_) throw std::runtime_error("coset count bug");
  return q;
}

FiniteGroup::Quotient FiniteGroup::abelianization() const {
  auto comm = commutator_elements();
  auto sub = subgroup_from_elements(comm);
  return quotient(sub);
}

CharacterGroup FiniteGroup::one_dim_characters() const {
  Quotient ab = abelianization();
  const FiniteGroup& A = *ab.group;
  int m = A.order();
  // Present A on all of its elements: relations e_i + e_j - e_{ij}, e_identity.
  IntMat R(m, m * m + 1);
  int col = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++col) {
      R.at(i, col) += 1;
      R.at(j, col) += 1;
      R.at(A.mul(i, j), col) -= 1;
    }
  R.at(A.id(), col) = 1;
  QuotientZm pres = quotient_presentation(R, m);

  // characters = tuples over the invariant factors
  std::vector<long long> dims;
  for (int i : pres.live) dims.push_back(to_long(pres.diag[i]));
  long long total = 1;
  for (long long d : dims) total *= d;

  CharacterGroup cg;
  for (long long t = 0; t < total; ++t) {
    std::vector<long long> tup(dims.size());
    long long tt = t;
    for (size_t i = 0; i < dims.size(); ++i) {
      tup[i] = tt % dims[i];
      tt /= dims[i];
    }
    Character chi;
    chi.val.assign(n_, Rat(0));
    for (int g = 0; g < n_; ++g) {
      std::vector<Int> x(m, Int(0));
      x[ab.proj[g]] = 1;
      std::vector<Int> crd = pres.coords(x);
      Rat v(0);
      for (size_t i = 0; i < dims.size(); ++i) v += Rat(crd[i]) * make_rat(tup[i]) / make_rat(dims[i]);
      chi.val[g] = mod1(v);
    }
    cg.all.push_back(std::move(chi));
  }
  // trivial character first, then deterministic order
  std::sort(cg.all.begin(), cg.all.end(), [](const Character& a, const Character& b) {
    return a.val < b.val;
  });
  if (!cg.all.empty() && !cg.all[0].is_trivial())
    throw std::runtime_error("character enumeration bug: trivial character not first");
  return cg;
}

std::vector<int> FiniteGroup::sylow_subgroup(long long p) const {
  long long ppart = 1, rem = n_;
  while (rem % p == 0) {
    rem /= p;
    ppart *= p;
  }
  if (ppart == 1) return {e_};
  auto is_ppower = [&](long long k) {
    while (k % p == 0) k /= p;
    return k == 1;
  };
  std::vector<int> P{e_};
  while ((long long)P.size() < ppart) {
    // normalizer of P
    std::vector<char> in(n_, 0);
    for (int x : P) in[x] = 1;
    std::vector<int> N;
    for (int g = 0; g < n_; ++g) {
      bool ok = true;
      for (int x : P)
        if (!in[conj(g, x)]) {
          ok = false;
          break;
        }
      if (ok) N.push_back(g);
    }
    bool grown = false;
    for (int y : N) {
      if (in[y] || !is_ppower(order_[y])) continue;
      std::vector<int> gens = P;
      gens.push_back(y);
      auto cand = subgroup_generated(gens);
      if (is_ppower(cand.order()) && cand.order() > (int)P.size()) {
        P = cand.to_parent;
        grown = true;
        break;
      }
    }
    if (!grown) throw std::runtime_error("sylow search failed");
  }
  std::sort(P.begin(), P.end());
  return P;
}

std::vector<int> double_coset_reps(const FiniteGroup& G, const std::vector<int>& S) {
  std::vector<char> seen(G.order(), 0);
  std::vector<int> reps;
  for (int g = 0; g < G.order(); ++g) {
    if (seen[g]) continue;
    reps.push_back(g);
    for (int s1 : S)
      for (int s2 : S) seen[G.mul(G.mul(s1, g), s2)] = 1;
  }
  return reps;
}

} // namespace malle
