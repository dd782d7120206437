#include "malle/cohomology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace malle {

TwoCocycle TwoCocycle::zero(const FiniteGroup& G, long long n) {
  TwoCocycle f;
  f.n = n;
  f.order = G.order();
  f.table.assign((size_t)f.order * f.order, 0);
  return f;
}

bool TwoCocycle::verify(const FiniteGroup& G) const {
  int N = G.order(), e = G.id();
  for (int g = 0; g < N; ++g)
    if (at(e, g) != 0 || at(g, e) != 0) return false;
  for (int g = 0; g < N; ++g)
    for (int h = 0; h < N; ++h)
      for (int k = 0; k < N; ++k) {
        long long lhs = (at(g, h) + at(G.mul(g, h), k)) % n;
        long long rhs = (at(h, k) + at(g, G.mul(h, k))) % n;
        if (lhs != rhs) return false;
      }
  return true;
}

TwoCocycle cocycle_add(const TwoCocycle& a, const TwoCocycle& b) {
  if (a.n != b.n || a.order != b.order) throw std::runtime_error("cocycle shape mismatch");
  TwoCocycle r = a;
  for (size_t i = 0; i < r.table.size(); ++i) r.table[i] = (r.table[i] + b.table[i]) % r.n;
  return r;
}

TwoCocycle cocycle_scale(const TwoCocycle& a, long long k) {
  TwoCocycle r = a;
  k %= r.n;
  if (k < 0) k += r.n;
  for (auto& v : r.table) v = v * k % r.n;
  return r;
}

namespace {

struct H2Build {
  const FiniteGroup& G;
  long long n;
  std::vector<int> nonid;
  std::vector<int> pair_index; // size N*N

  explicit H2Build(const FiniteGroup& G_, long long n_) : G(G_), n(n_) {
    int N = G.order();
    for (int g = 0; g < N; ++g)
      if (g != G.id()) nonid.push_back(g);
    pair_index.assign((size_t)N * N, -1);
    int idx = 0;
    for (int g : nonid)
      for (int h : nonid) pair_index[(size_t)g * N + h] = idx++;
  }
  int vars() const { return (int)(nonid.size() * nonid.size()); }

  std::vector<SparseRow> d2_rows() const {
    std::vector<SparseRow> rows;
    int N = G.order(), e = G.id();
    rows.reserve(nonid.size() * nonid.size() * nonid.size());
    for (int g : nonid)
      for (int h : nonid)
        for (int k : nonid) {
          SparseRow r;
          // f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0
          r.entries.push_back({pair_index[(size_t)h * N + k], 1});
          int gh = G.mul(g, h);
          if (gh != e) r.entries.push_back({pair_index[(size_t)gh * N + k], -1});
          int hk = G.mul(h, k);
          if (hk != e) r.entries.push_back({pair_index[(size_t)g * N + hk], 1});
          r.entries.push_back({pair_index[(size_t)g * N + h], -1});
          rows.push_back(std::move(r));
        }
    return rows;
  }

  std::vector<Int> cocycle_vector(const TwoCocycle& f) const {
    int N = G.order();
    std::vector<Int> x(vars());
    for (int g : nonid)
      for (int h : nonid) x[pair_index[(size_t)g * N + h]] = make_int(f.at(g, h));
    return x;
  }

  TwoCocycle vector_cocycle(const std::vector<Int>& x) const {
    TwoCocycle f = TwoCocycle::zero(G, n);
    int N = G.order();
    for (int g : nonid)
      for (int h : nonid) {
        Int r;
        Int nn = make_int(n);
        mpz_fdiv_r(r.get_mpz_t(), x[pair_index[(size_t)g * N + h]].get_mpz_t(), nn.get_mpz_t());
        f.at(g, h) = to_long(r);
      }
    return f;
  }
};

CohomGroup h2_build(const FiniteGroup& G, long long n, const std::vector<TwoCocycle>& extra_relations,
                    int size_cap) {
  if (G.order() > size_cap)
    throw std::runtime_error("bar-resolution degree-2 system exceeds size cap (|G| = " +
                             std::to_string(G.order()) + " > " + std::to_string(size_cap) + ")");
  CohomGroup out;
  out.n = n;
  if (G.order() == 1) {
    out.lattice.basis = IntMat(0, 0);
    out.lattice.Vinv = IntMat(0, 0);
    out.pres.m = 0;
    return out;
  }
  H2Build b(G, n);
  out.nonid = b.nonid;
  out.pair_index = b.pair_index;
  int m = b.vars();
  out.lattice = kernel_mod_lattice(b.d2_rows(), m, n);

  // relations in lattice coordinates: coboundaries, n*Z^m, extra cocycles
  int N = G.order(), e = G.id();
  std::vector<std::vector<Int>> rel_cols;
  for (int x : b.nonid) {
    std::vector<Int> col(m, Int(0));
    for (int g : b.nonid)
      for (int h : b.nonid) {
        long long v = 0;
        if (g == x) v += 1;
        if (h == x) v += 1;
        if (G.mul(g, h) == x) v -= 1;
        if (v) col[b.pair_index[(size_t)g * N + h]] = make_int(v);
      }
    (void)e;
    rel_cols.push_back(out.lattice.coords(col));
  }
  for (const auto& f : extra_relations) rel_cols.push_back(out.lattice.coords(b.cocycle_vector(f)));

  // n * (lattice basis vector) lies in n Z^m, i.e. n e_j belongs to the
  // relation span in lattice coordinates; so all columns may be reduced mod n
  // against an explicit n I block, keeping the presentation entries tiny.
  Int nn = make_int(n);
  IntMat R(m, (int)rel_cols.size() + 2 * m);
  for (int j = 0; j < (int)rel_cols.size(); ++j)
    for (int i = 0; i < m; ++i) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), rel_cols[j][i].get_mpz_t(), nn.get_mpz_t());
      R.at(i, j) = r;
    }
  // n * e_i (ambient) in lattice coordinates: (n / scale_j) * Vinv[j][i]
  for (int i = 0; i < m; ++i) {
    int j0 = (int)rel_cols.size() + i;
    for (int j = 0; j < m; ++j) {
      Int g = nn / out.lattice.scale[j];
      Int v = g * out.lattice.Vinv.at(j, i);
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), nn.get_mpz_t());
      R.at(j, j0) = r;
    }
  }
  for (int i = 0; i < m; ++i) R.at(i, (int)rel_cols.size() + m + i) = nn;
  out.pres = quotient_presentation_modn(R, m, n);
  out.group = out.pres.group;
  if (out.group.free_rank != 0) throw std::runtime_error("H^2 must be finite");

  for (size_t k = 0; k < out.pres.live.size(); ++k) {
    std::vector<Int> gen = out.pres.generator((int)k);
    std::vector<Int> vec = out.lattice.basis.apply(gen);
    TwoCocycle f = b.vector_cocycle(vec);
    if (G.order() <= 24 && !f.verify(G)) throw std::runtime_error("emitted basis cocycle invalid");
    out.basis.push_back(std::move(f));
  }
  return out;
}

} // namespace

std::vector<Int> CohomGroup::coords(const TwoCocycle& f) const {
  if (pres.m == 0) return {};
  int N = f.order;
  std::vector<Int> x(pres.m, Int(0));
  for (int g : nonid)
    for (int h : nonid) x[pair_index[(size_t)g * N + h]] = make_int(f.at(g, h));
  return pres.coords(lattice.coords(x));
}

TwoCocycle CohomGroup::from_coords(const std::vector<Int>& c, const FiniteGroup& G) const {
  TwoCocycle f = TwoCocycle::zero(G, n);
  for (size_t k = 0; k < c.size() && k < basis.size(); ++k)
    f = cocycle_add(f, cocycle_scale(basis[k], to_long(c[k] % make_int(n))));
  return f;
}

CohomGroup h2_trivial(const FiniteGroup& G, long long n, int size_cap) {
  return h2_build(G, n, {}, size_cap);
}

TwoCocycle bockstein(const FiniteGroup& G, const Character& chi, long long n) {
  // canonical lift c(g) = n * chi(g) in [0, n)
  int N = G.order();
  std::vector<long long> c(N);
  for (int g = 0; g < N; ++g) {
    Rat v = chi.val[g] * make_rat(n);
    if (!is_integer(v)) throw std::runtime_error("character is not n-torsion");
    c[g] = to_long(v.get_num());
  }
  TwoCocycle f = TwoCocycle::zero(G, n);
  for (int g = 0; g < N; ++g)
    for (int h = 0; h < N; ++h) {
      long long s = c[g] + c[h] - c[G.mul(g, h)];
      if (s % n != 0) throw std::runtime_error("character lift is not a homomorphism mod n");
      long long v = (s / n) % n;
      if (v < 0) v += n;
      f.at(g, h) = v;
    }
  return f;
}

CohomGroup h2_qz(const FiniteGroup& G, int size_cap) {
  long long n = G.order();
  if (n == 1) return h2_build(G, 1, {}, size_cap);
  CharacterGroup cg = G.one_dim_characters();
  std::vector<TwoCocycle> bocks;
  for (const auto& chi : cg.all)
    if (!chi.is_trivial()) bocks.push_back(bockstein(G, chi, n));
  return h2_build(G, n, bocks, size_cap);
}

bool restrict_test(const FiniteGroup& G, const TwoCocycle& f, const std::vector<int>& sub) {
  auto S = G.subgroup_from_elements(sub);
  TwoCocycle z = TwoCocycle::zero(*S.group, f.n);
  for (int a = 0; a < S.group->order(); ++a)
    for (int b = 0; b < S.group->order(); ++b)
      z.at(a, b) = f.at(S.to_parent[a], S.to_parent[b]);
  return restrict_test_qz(*S.group, z);
}

bool restrict_test_plain(const FiniteGroup& G, const TwoCocycle& f, const std::vector<int>& sub) {
  std::vector<int> elems;
  for (int x : sub)
    if (x != G.id()) elems.push_back(x);
  if (elems.empty()) return true;
  std::vector<int> pos(G.order(), -1);
  for (int i = 0; i < (int)elems.size(); ++i) pos[elems[i]] = i;
  int k = (int)elems.size();
  IntMat A(k * k, k);
  std::vector<Int> b(k * k, Int(0));
  int row = 0;
  for (int g : elems)
    for (int h : elems) {
      A.at(row, pos[g]) += 1;
      A.at(row, pos[h]) += 1;
      int gh = G.mul(g, h);
      if (gh != G.id()) {
        if (pos[gh] < 0) throw std::runtime_error("subgroup not closed");
        A.at(row, pos[gh]) -= 1;
      }
      b[row] = make_int(f.at(g, h));
      ++row;
    }
  return solve_mod(A, b, make_int(f.n)).has_value();
}

TwoCocycle cocycle_galois_act(const GaloisDatum& datum, int sigma, const TwoCocycle& f) {
  const FiniteGroup& G = *datum.G;
  int sinv = datum.gamma->inv(sigma);
  TwoCocycle r = TwoCocycle::zero(G, f.n);
  long long c = datum.cyc[sigma] % f.n;
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      r.at(g, h) = f.at(datum.action[sinv][g], datum.action[sinv][h]) * c % f.n;
  return r;
}

H1Result h1_lattice(const FiniteGroup& gamma, const std::vector<IntMat>& mats) {
  int m = gamma.order();
  if ((int)mats.size() != m) throw std::runtime_error("one matrix per gamma element required");
  int r = mats.empty() ? 0 : mats[0].rows;
  for (const auto& M : mats)
    if (M.rows != r || M.cols != r) throw std::runtime_error("action matrices must be square, equal size");
  // verify the matrices define an action
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) {
      IntMat st = mats[s].mul(mats[t]);
      const IntMat& target = mats[gamma.mul(s, t)];
      if (st.a != target.a) throw std::runtime_error("matrices do not define a gamma action");
    }

  std::vector<int> nonid;
  for (int s = 0; s < m; ++s)
    if (s != gamma.id()) nonid.push_back(s);
  int nv = (int)nonid.size();
  if (nv == 0) {
    H1Result out;
    return out;
  }
  std::vector<int> pos(m, -1);
  for (int i = 0; i < nv; ++i) pos[nonid[i]] = i;

  // cocycle condition f(st) = f(s) + s f(t); variables f(s) in Z^r for s != id
  IntMat D1(nv * nv * r, nv * r);
  int row = 0;
  for (int s : nonid)
    for (int t : nonid) {
      int st = gamma.mul(s, t);
      for (int i = 0; i < r; ++i, ++row) {
        if (st != gamma.id())
          D1.at(row, pos[st] * r + i) += 1;
        D1.at(row, pos[s] * r + i) -= 1;
        for (int j = 0; j < r; ++j)
          if (mats[s].at(i, j) != 0) D1.at(row, pos[t] * r + j) -= mats[s].at(i, j);
      }
    }
  IntMat K = integer_kernel(D1); // (nv*r) x z
  int z = K.cols;

  // principal cocycles: columns (s -> (M_s - I) e_j)
  IntMat B(nv * r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < nv; ++i) {
      int s = nonid[i];
      for (int k = 0; k < r; ++k) {
        Int v = mats[s].at(k, j);
        if (k == j) v -= 1;
        B.at(i * r + k, j) = v;
      }
    }
  // coordinates of B columns in K
  SnfResult sk = snf(K);
  auto coords_in_K = [&](const std::vector<Int>& v) {
    std::vector<Int> c = sk.U.apply(v);
    std::vector<Int> w(K.cols, Int(0));
    for (int i = 0; i < (int)c.size(); ++i) {
      if (i < sk.rank) {
        Int q, rr;
        mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), c[i].get_mpz_t(), sk.diag[i].get_mpz_t());
        if (rr != 0) throw std::runtime_error("principal cocycle outside cocycle lattice");
        w[i] = q;
      } else if (c[i] != 0) {
        throw std::runtime_error("principal cocycle outside cocycle lattice");
      }
    }
    return sk.V.apply(w);
  };
  IntMat R(z, r);
  for (int j = 0; j < r; ++j) {
    std::vector<Int> col(nv * r);
    for (int i = 0; i < nv * r; ++i) col[i] = B.at(i, j);
    std::vector<Int> c = coords_in_K(col);
    for (int i = 0; i < z; ++i) R.at(i, j) = c[i];
  }
  QuotientZm pres = quotient_presentation(R, z);
  H1Result out;
  out.group = pres.group;
  if (out.group.free_rank != 0)
    throw std::runtime_error("H^1 of a finite group with lattice coefficients must be finite");
  for (size_t k = 0; k < pres.live.size(); ++k) {
    std::vector<Int> gen = pres.generator((int)k);
    std::vector<Int> vec = K.apply(gen); // length nv*r
    std::vector<std::vector<Int>> table(m, std::vector<Int>(r, Int(0)));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < r; ++j) table[nonid[i]][j] = vec[i * r + j];
    out.cocycles.push_back(std::move(table));
  }
  return out;
}

CohomGroup h2_qz_at_modulus(const FiniteGroup& A, long long n, int size_cap) {
  if (A.order() > 1 && n % A.order() != 0)
    throw std::runtime_error("modulus must be a multiple of the group order");
  if (A.order() == 1) return h2_build(A, std::max(n, 1LL), {}, size_cap);
  CharacterGroup cg = A.one_dim_characters();
  std::vector<TwoCocycle> bocks;
  for (const auto& chi : cg.all)
    if (!chi.is_trivial()) bocks.push_back(bockstein(A, chi, n));
  return h2_build(A, n, bocks, size_cap);
}

int SylowH2::num_gens() const {
  int k = 0;
  for (const auto& p : parts) k += (int)p.stable_gens.size();
  return k;
}

SylowH2 sylow_h2_qz(const FiniteGroup& G, int bar_cap) {
  SylowH2 out;
  long long n = G.order();
  std::vector<long long> primes;
  long long t = n;
  for (long long p = 2; p * p <= t; ++p)
    if (t % p == 0) {
      primes.push_back(p);
      while (t % p == 0) t /= p;
    }
  if (t > 1) primes.push_back(t);

  for (long long p : primes) {
    SylowH2::Part part;
    part.p = p;
    part.sylow = G.sylow_subgroup(p);
    part.sub = G.subgroup_from_elements(part.sylow);
    const FiniteGroup& S = *part.sub.group;
    if (S.order() > bar_cap)
      throw std::runtime_error("Sylow subgroup exceeds bar-resolution cap");
    part.h2 = h2_qz(S, bar_cap);
    int k = (int)part.h2.basis.size();
    if (k == 0) {
      out.parts.push_back(std::move(part));
      continue;
    }

    // stability conditions over double cosets
    std::vector<Int> dvec; // invariant factors of H^2(S, Q/Z), aligned with basis
    for (int i = 0; i < k; ++i) dvec.push_back(part.h2.group.factors[i]);
    Int L(1);
    for (const auto& d : dvec) L = lcm(L, d);

    // rows over a to-be-determined common modulus: collect (coeffs, modulus)
    struct CondRow {
      std::vector<Int> coef; // length k
      Int mod;
    };
    std::vector<CondRow> conds;

    std::vector<char> inS(G.order(), 0);
    for (int x : part.sylow) inS[x] = 1;
    for (int g : double_coset_reps(G, part.sylow)) {
      if (g == G.id()) continue;
      // D = S cap g S g^-1 = { x in S : g^-1 x g in S }
      std::vector<int> Delems;
      int gi = G.inv(g);
      for (int x : part.sylow)
        if (inS[G.conj(gi, x)]) Delems.push_back(x);
      if ((int)Delems.size() <= 1) continue;
      auto Dsub = G.subgroup_from_elements(Delems);
      // H^2(D, Q/Z) presented at the Sylow modulus (|D| divides |S|)
      CohomGroup h2D = h2_qz_at_modulus(*Dsub.group, part.h2.n, bar_cap);
      if (h2D.basis.empty()) continue;
      int nth = (int)h2D.group.factors.size();
      std::vector<std::vector<Int>> theta(k); // per basis class of S
      for (int i = 0; i < k; ++i) {
        const TwoCocycle& fi = part.h2.basis[i];
        TwoCocycle diff = TwoCocycle::zero(*Dsub.group, fi.n);
        for (int a = 0; a < Dsub.group->order(); ++a)
          for (int b = 0; b < Dsub.group->order(); ++b) {
            int ga = Dsub.to_parent[a], gb = Dsub.to_parent[b];
            long long v1 = fi.at(part.sub.from_parent[ga], part.sub.from_parent[gb]);
            long long v2 = fi.at(part.sub.from_parent[G.conj(gi, ga)],
                                 part.sub.from_parent[G.conj(gi, gb)]);
            long long v = (v1 - v2) % fi.n;
            if (v < 0) v += fi.n;
            diff.at(a, b) = v;
          }
        theta[i] = h2D.coords(diff);
      }
      for (int c = 0; c < nth; ++c) {
        CondRow row;
        row.coef.resize(k);
        bool nz = false;
        for (int i = 0; i < k; ++i) {
          row.coef[i] = theta[i][c];
          if (row.coef[i] != 0) nz = true;
        }
        if (!nz) continue;
        row.mod = h2D.group.factors[c];
        conds.push_back(std::move(row));
      }
    }
    for (const auto& cr : conds) L = lcm(L, cr.mod);
    std::vector<SparseRow> rows;
    for (const auto& cr : conds) {
      SparseRow row;
      Int sc = L / cr.mod;
      for (int i = 0; i < k; ++i) {
        Int v = cr.coef[i] * sc % L;
        if (v != 0) row.entries.push_back({i, to_long(v)});
      }
      rows.push_back(row);
    }
    // d_i e_i lies in the solution lattice automatically (d_i [f_i] = 0 in
    // H^2(S), so its theta-coordinates vanish); solutions over Z^k suffice.
    KernelLattice sol = kernel_mod_lattice(rows, k, to_long(L));
    // stable subgroup of the finite group ⊕ Z/d_i: image of sol.basis
    // presentation: Z^k / {c : sol.basis * c = 0 mod d_i}
    std::vector<SparseRow> relrows;
    for (int i = 0; i < k; ++i) {
      SparseRow row;
      Int sc = L / dvec[i];
      for (int j = 0; j < k; ++j) {
        Int v = sol.basis.at(i, j) * sc % L;
        if (v != 0) row.entries.push_back({j, to_long(v)});
      }
      relrows.push_back(row);
    }
    KernelLattice T = kernel_mod_lattice(relrows, k, to_long(L));
    QuotientZm pres = quotient_presentation(T.basis, k);
    part.stable_group = pres.group;
    for (size_t j = 0; j < pres.live.size(); ++j) {
      std::vector<Int> gen = pres.generator((int)j);
      std::vector<Int> combo = sol.basis.apply(gen);
      for (int i = 0; i < k; ++i) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), combo[i].get_mpz_t(), dvec[i].get_mpz_t());
        combo[i] = r;
      }
      part.stable_gens.push_back(combo);
    }
    out.parts.push_back(std::move(part));
  }

  for (const auto& part : out.parts)
    for (const auto& d : part.stable_group.factors) out.group.factors.push_back(d);
  std::sort(out.group.factors.begin(), out.group.factors.end());
  return out;
}

bool SylowH2::combo_restricts_trivially(const FiniteGroup& G, const std::vector<Int>& combo,
                                        const std::vector<int>& A) const {
  int off = 0;
  for (const auto& part : parts) {
    int k = (int)part.h2.basis.size();
    int ng = (int)part.stable_gens.size();
    if (ng == 0) {
      off += ng;
      continue;
    }
    // p-part of A
    std::vector<int> Ap;
    for (int a : A) {
      int o = G.order_of(a);
      bool ppow = true;
      while (o % part.p == 0) o /= part.p;
      ppow = (o == 1);
      if (ppow) Ap.push_back(a);
    }
    if ((int)Ap.size() > 1) {
      // conjugate Ap into the Sylow subgroup
      std::vector<char> inS(G.order(), 0);
      for (int x : part.sylow) inS[x] = 1;
      int t = -1;
      for (int g = 0; g < G.order() && t < 0; ++g) {
        bool ok = true;
        for (int a : Ap)
          if (!inS[G.conj(g, a)]) {
            ok = false;
            break;
          }
        if (ok) t = g;
      }
      if (t < 0) throw std::runtime_error("p-subgroup not conjugate into Sylow (bug)");
      // assemble the combo cocycle on S
      TwoCocycle f = TwoCocycle::zero(*part.sub.group, part.h2.n);
      for (int j = 0; j < ng; ++j) {
        Int cj = combo[off + j];
        if (cj == 0) continue;
        for (int i = 0; i < k; ++i) {
          Int ci = part.stable_gens[j][i] * cj;
          f = cocycle_add(f, cocycle_scale(part.h2.basis[i], to_long(ci % make_int(part.h2.n))));
        }
      }
      // restrict along a |-> t a t^-1
      std::vector<int> Apar;
      for (int a : Ap) Apar.push_back(G.conj(t, a));
      auto ApS = G.subgroup_from_elements(Apar);
      TwoCocycle z = TwoCocycle::zero(*ApS.group, part.h2.n);
      for (int a = 0; a < ApS.group->order(); ++a)
        for (int b = 0; b < ApS.group->order(); ++b)
          z.at(a, b) = f.at(part.sub.from_parent[ApS.to_parent[a]],
                            part.sub.from_parent[ApS.to_parent[b]]);
      if (!restrict_test_qz(*ApS.group, z)) return false;
    }
    off += ng;
  }
  return true;
}

bool restrict_test_qz(const FiniteGroup& A, const TwoCocycle& z) {
  // triviality in H^2(A, Q/Z): coboundary modulo Bockstein images
  CharacterGroup cg = A.one_dim_characters();
  std::vector<TwoCocycle> bocks;
  for (const auto& chi : cg.all)
    if (!chi.is_trivial()) bocks.push_back(bockstein(A, chi, z.n));
  // solve d1(u) + sum lambda_j B_j = z over Z/n
  std::vector<int> elems;
  for (int x = 0; x < A.order(); ++x)
    if (x != A.id()) elems.push_back(x);
  if (elems.empty()) return true;
  std::vector<int> pos(A.order(), -1);
  for (int i = 0; i < (int)elems.size(); ++i) pos[elems[i]] = i;
  int kk = (int)elems.size();
  int nb = (int)bocks.size();
  IntMat M(kk * kk, kk + nb);
  std::vector<Int> b(kk * kk, Int(0));
  int row = 0;
  for (int g : elems)
    for (int h : elems) {
      M.at(row, pos[g]) += 1;
      M.at(row, pos[h]) += 1;
      int gh = A.mul(g, h);
      if (gh != A.id()) M.at(row, pos[gh]) -= 1;
      for (int j = 0; j < nb; ++j) M.at(row, kk + j) = make_int(bocks[j].at(g, h));
      b[row] = make_int(z.at(g, h));
      ++row;
    }
  return solve_mod(M, b, make_int(z.n)).has_value();
}

} // namespace malle
