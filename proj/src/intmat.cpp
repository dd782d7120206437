#include "malle/intmat.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <stdexcept>

namespace malle {

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::mul(const IntMat& o) const {
  if (cols != o.rows) throw std::runtime_error("matrix shape mismatch");
  IntMat r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Int& v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < o.cols; ++j)
        if (o.at(k, j) != 0) r.at(i, j) += v * o.at(k, j);
    }
  return r;
}

IntMat IntMat::transpose() const {
  IntMat r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

std::vector<Int> IntMat::apply(const std::vector<Int>& x) const {
  if ((int)x.size() != cols) throw std::runtime_error("vector length mismatch");
  std::vector<Int> y(rows);
  for (int i = 0; i < rows; ++i) {
    Int s = 0;
    for (int j = 0; j < cols; ++j)
      if (at(i, j) != 0 && x[j] != 0) s += at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

struct SnfWork {
  IntMat D, U, Uinv, V, Vinv;

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < D.cols; ++c) std::swap(D.at(i, c), D.at(j, c));
    for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
    for (int r = 0; r < Uinv.rows; ++r) std::swap(Uinv.at(r, i), Uinv.at(r, j));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < D.rows; ++r) std::swap(D.at(r, i), D.at(r, j));
    for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
    for (int c = 0; c < Vinv.cols; ++c) std::swap(Vinv.at(i, c), Vinv.at(j, c));
  }
  // row_i -= q * row_j
  void row_sub(int i, int j, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < D.cols; ++c)
      if (D.at(j, c) != 0) D.at(i, c) -= q * D.at(j, c);
    for (int c = 0; c < U.cols; ++c)
      if (U.at(j, c) != 0) U.at(i, c) -= q * U.at(j, c);
    for (int r = 0; r < Uinv.rows; ++r)
      if (Uinv.at(r, i) != 0) Uinv.at(r, j) += q * Uinv.at(r, i);
  }
  // col_j -= q * col_i
  void col_sub(int j, int i, const Int& q) {
    if (q == 0) return;
    for (int r = 0; r < D.rows; ++r)
      if (D.at(r, i) != 0) D.at(r, j) -= q * D.at(r, i);
    for (int r = 0; r < V.rows; ++r)
      if (V.at(r, i) != 0) V.at(r, j) -= q * V.at(r, i);
    for (int c = 0; c < Vinv.cols; ++c)
      if (Vinv.at(j, c) != 0) Vinv.at(i, c) += q * Vinv.at(j, c);
  }
  void negate_row(int i) {
    for (int c = 0; c < D.cols; ++c) D.at(i, c) = -D.at(i, c);
    for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
    for (int r = 0; r < Uinv.rows; ++r) Uinv.at(r, i) = -Uinv.at(r, i);
  }
};

Int rounded_quot(const Int& a, const Int& b) {
  // quotient minimizing |a - q b|
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int babs = abs(b);
  if (r * 2 > babs) q += 1;
  return q;
}

} // namespace

SnfResult snf(const IntMat& A) {
  SnfWork w;
  w.D = A;
  w.U = IntMat::identity(A.rows);
  w.Uinv = IntMat::identity(A.rows);
  w.V = IntMat::identity(A.cols);
  w.Vinv = IntMat::identity(A.cols);

  int n = std::min(A.rows, A.cols);
  int t = 0;
  while (t < n) {
    // re-select the global minimum pivot before every pass; reducing the
    // whole row/column by it keeps entries polynomially bounded
    bool stage_done = false;
    for (;;) {
      int pi = -1, pj = -1;
      Int best;
      for (int i = t; i < A.rows; ++i)
        for (int j = t; j < A.cols; ++j) {
          const Int& v = w.D.at(i, j);
          if (v == 0) continue;
          Int av = abs(v);
          if (pi < 0 || av < best) {
            best = av;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        stage_done = true; // nothing left
        break;
      }
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);

      bool rem = false;
      for (int i = t + 1; i < A.rows; ++i) {
        if (w.D.at(i, t) == 0) continue;
        w.row_sub(i, t, rounded_quot(w.D.at(i, t), w.D.at(t, t)));
        if (w.D.at(i, t) != 0) rem = true;
      }
      if (rem) continue; // strictly smaller pivot exists now
      for (int j = t + 1; j < A.cols; ++j) {
        if (w.D.at(t, j) == 0) continue;
        w.col_sub(j, t, rounded_quot(w.D.at(t, j), w.D.at(t, t)));
        if (w.D.at(t, j) != 0) rem = true;
      }
      if (rem) continue;
      // row and column clear: pivot must divide the remaining block
      bool fixed = true;
      for (int r = t + 1; r < A.rows && fixed; ++r)
        for (int c = t + 1; c < A.cols && fixed; ++c)
          if (w.D.at(r, c) % w.D.at(t, t) != 0) {
            w.row_sub(t, r, Int(-1)); // add row r to row t
            fixed = false;
          }
      if (fixed) break;
    }
    if (stage_done) break;
    if (w.D.at(t, t) < 0) w.negate_row(t);
    ++t;
  }

  SnfResult res;
  res.D = std::move(w.D);
  res.U = std::move(w.U);
  res.Uinv = std::move(w.Uinv);
  res.V = std::move(w.V);
  res.Vinv = std::move(w.Vinv);
  res.diag.resize(n);
  res.rank = 0;
  for (int i = 0; i < n; ++i) {
    res.diag[i] = res.D.at(i, i);
    if (res.diag[i] != 0) ++res.rank;
  }
  return res;
}

IntMat integer_kernel(const IntMat& A) {
  SnfResult s = snf(A);
  int k = A.cols - s.rank;
  IntMat K(A.cols, k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < A.cols; ++r) K.at(r, c) = s.V.at(r, s.rank + c);
  return K;
}

std::string FinAbGroup::str() const {
  if (trivial()) return "0";
  std::string s;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) s += " x ";
    s += "Z/" + factors[i].get_str();
  }
  for (int i = 0; i < free_rank; ++i) {
    if (!s.empty()) s += " x ";
    s += "Z";
  }
  return s;
}

std::vector<Int> QuotientZm::coords(const std::vector<Int>& x) const {
  std::vector<Int> y = U.apply(x);
  std::vector<Int> out;
  out.reserve(live.size());
  for (int i : live) {
    if (diag[i] == 0)
      out.push_back(y[i]);
    else {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), y[i].get_mpz_t(), diag[i].get_mpz_t());
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Int> QuotientZm::generator(int k) const {
  std::vector<Int> g(m);
  for (int r = 0; r < m; ++r) g[r] = Uinv.at(r, live[k]);
  return g;
}

QuotientZm quotient_presentation(const IntMat& R, int m) {
  if (R.rows != m) throw std::runtime_error("relation matrix row count mismatch");
  SnfResult s = snf(R);
  QuotientZm q;
  q.m = m;
  q.U = s.U;
  q.Uinv = s.Uinv;
  q.diag.assign(m, Int(0));
  int n = std::min(R.rows, R.cols);
  for (int i = 0; i < n; ++i) q.diag[i] = s.diag[i];
  for (int i = 0; i < m; ++i)
    if (q.diag[i] != 1) q.live.push_back(i);
  for (int i : q.live) {
    if (q.diag[i] == 0)
      q.group.free_rank++;
    else
      q.group.factors.push_back(q.diag[i]);
  }
  std::sort(q.group.factors.begin(), q.group.factors.end());
  return q;
}

namespace {

long long mod_norm(long long v, long long n) {
  v %= n;
  if (v < 0) v += n;
  return v;
}

// unit u (gcd(u,n)=1) with u*a = gcd(a,n) (mod n)
long long unit_for(long long a, long long n) {
  long long g = std::gcd(a, n);
  long long a1 = a / g, n1 = n / g;
  // inverse of a1 mod n1
  long long u = 1;
  if (n1 > 1) {
    long long t0 = 0, t1 = 1, r0 = n1, r1 = mod_norm(a1, n1);
    while (r1 != 0) {
      long long qq = r0 / r1;
      std::swap(r0 -= qq * r1, r1);
      std::swap(t0 -= qq * t1, t1);
    }
    u = mod_norm(t0, n1);
  }
  while (std::gcd(u, n) != 1) u += n1;
  return mod_norm(u, n);
}

void ext_gcd(long long a, long long b, long long& g, long long& s, long long& t) {
  long long s0 = 1, s1 = 0, t0 = 0, t1 = 1, r0 = a, r1 = b;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::swap(r0 -= q * r1, r1);
    std::swap(s0 -= q * s1, s1);
    std::swap(t0 -= q * t1, t1);
  }
  g = r0;
  s = s0;
  t = t0;
}

} // namespace

QuotientZm quotient_presentation_modn(const IntMat& R, int m, long long n) {
  if (R.rows != m) throw std::runtime_error("relation matrix row count mismatch");
  // dense mod-n working copy
  int k = R.cols;
  std::vector<std::vector<long long>> A(m, std::vector<long long>(k, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) {
      Int r;
      Int nn = make_int(n);
      mpz_fdiv_r(r.get_mpz_t(), R.at(i, j).get_mpz_t(), nn.get_mpz_t());
      A[i][j] = to_long(r);
    }
  std::vector<std::vector<long long>> U(m, std::vector<long long>(m, 0)),
      Ui(m, std::vector<long long>(m, 0));
  for (int i = 0; i < m; ++i) U[i][i] = Ui[i][i] = 1;
  auto mod = [&](long long v) { return ((v % n) + n) % n; };
  auto row_scale = [&](int i, long long u) {
    for (auto& v : A[i]) v = mod(v * u);
    for (auto& v : U[i]) v = mod(v * u);
    long long uinv = 0; // inverse of u mod n
    {
      long long t0 = 0, t1 = 1, r0 = n, r1 = mod(u);
      while (r1) {
        long long q = r0 / r1;
        std::swap(r0 -= q * r1, r1);
        std::swap(t0 -= q * t1, t1);
      }
      uinv = mod(t0);
    }
    for (int r = 0; r < m; ++r) Ui[r][i] = mod(Ui[r][i] * uinv);
  };
  auto row_addmul = [&](int i, int j, long long q) {
    // row_i += q * row_j; Uinv col_j -= q * col_i
    q = mod(q);
    if (!q) return;
    for (int c = 0; c < k; ++c) A[i][c] = mod(A[i][c] + q * A[j][c]);
    for (int c = 0; c < m; ++c) U[i][c] = mod(U[i][c] + q * U[j][c]);
    for (int r = 0; r < m; ++r) Ui[r][j] = mod(Ui[r][j] - q * Ui[r][i]);
  };
  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    std::swap(A[i], A[j]);
    std::swap(U[i], U[j]);
    for (int r = 0; r < m; ++r) std::swap(Ui[r][i], Ui[r][j]);
  };
  auto col_swap = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m; ++r) std::swap(A[r][i], A[r][j]);
  };
  auto col_addmul = [&](int i, int j, long long q) {
    q = mod(q);
    if (!q) return;
    for (int r = 0; r < m; ++r) A[r][i] = mod(A[r][i] + q * A[r][j]);
  };

  int stages = std::min(m, k);
  std::vector<long long> diag(m, n); // untouched coordinates are full Z/n factors
  for (int t = 0; t < stages; ++t) {
    for (;;) {
      // pick the entry with the smallest gcd with n
      int pi = -1, pj = -1;
      long long best = n + 1;
      for (int i = t; i < m; ++i)
        for (int j = t; j < k; ++j) {
          if (!A[i][j]) continue;
          long long g = std::gcd(A[i][j], n);
          if (g < best) {
            best = g;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break; // all zero: remaining factors are Z/n
      row_swap(t, pi);
      col_swap(t, pj);
      row_scale(t, unit_for(A[t][t], n));
      long long g = A[t][t]; // = gcd with n after normalization
      bool rem = false;
      for (int i = t + 1; i < m; ++i) {
        if (!A[i][t]) continue;
        if (A[i][t] % g == 0) {
          row_addmul(i, t, n - A[i][t] / g % n);
        } else {
          // combine to reach gcd(g, A[i][t]) at the pivot
          long long gg, sa, sb;
          long long a = g, b = A[i][t];
          {
            long long s0 = 1, s1 = 0, t0 = 0, t1 = 1, r0 = a, r1 = b;
            while (r1) {
              long long q = r0 / r1;
              std::swap(r0 -= q * r1, r1);
              std::swap(s0 -= q * s1, s1);
              std::swap(t0 -= q * t1, t1);
            }
            gg = r0;
            sa = s0;
            sb = t0;
          }
          (void)gg;
          (void)sa;
          row_addmul(t, i, sb); // pivot row now has gcd-achieving entry
          row_scale(t, unit_for(A[t][t], n));
          rem = true;
          break;
        }
      }
      if (rem) continue;
      for (int j = t + 1; j < k; ++j) {
        if (!A[t][j]) continue;
        if (A[t][j] % g == 0) {
          col_addmul(j, t, n - A[t][j] / g % n);
        } else {
          long long b = A[t][j];
          long long s0 = 1, s1 = 0, t0 = 0, t1 = 1, r0 = g, r1 = b;
          while (r1) {
            long long q = r0 / r1;
            std::swap(r0 -= q * r1, r1);
            std::swap(s0 -= q * s1, s1);
            std::swap(t0 -= q * t1, t1);
          }
          (void)s0;
          col_addmul(t, j, t0);
          row_scale(t, unit_for(A[t][t], n));
          rem = true;
          break;
        }
      }
      if (rem) continue;
      diag[t] = std::gcd(A[t][t], n);
      break;
    }
    if (diag[t] == n && A[t][t] == 0) {
      // nothing left anywhere; remaining diag entries stay n
      break;
    }
  }

  // canonicalize into an invariant-factor chain with a tiny integer SNF on
  // the diagonal relations diag(d_i)
  IntMat Dm(m, m);
  for (int i = 0; i < m; ++i) Dm.at(i, i) = make_int(diag[i]);
  SnfResult s = snf(Dm);
  QuotientZm q;
  q.m = m;
  // combined transform: coords(x) = S.U * (U * x); generators = Uinv * S.Uinv
  IntMat Ubig(m, m), Uibig(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Ubig.at(i, j) = make_int(U[i][j]);
      Uibig.at(i, j) = make_int(Ui[i][j]);
    }
  q.U = s.U.mul(Ubig);
  q.Uinv = Uibig.mul(s.Uinv);
  q.diag.assign(m, Int(0));
  for (int i = 0; i < m; ++i) q.diag[i] = s.diag[i];
  for (int i = 0; i < m; ++i)
    if (q.diag[i] != 1) q.live.push_back(i);
  for (int i : q.live) {
    if (q.diag[i] == 0)
      q.group.free_rank++;
    else
      q.group.factors.push_back(q.diag[i]);
  }
  std::sort(q.group.factors.begin(), q.group.factors.end());
  return q;
}


IntMat mod_echelon(const std::vector<SparseRow>& rows, int cols, long long n) {
  if (n <= 1) {
    if (n == 1) return IntMat(0, cols);
    throw std::runtime_error("modulus must be >= 1");
  }
  std::vector<std::vector<long long>> piv(cols); // pivot row per leading col (empty = none)
  std::vector<long long> work(cols);

  for (const SparseRow& sr : rows) {
    std::fill(work.begin(), work.end(), 0);
    bool nonzero = false;
    for (auto [c, v] : sr.entries) {
      work[c] = mod_norm(work[c] + v, n);
      if (work[c]) nonzero = true;
    }
    if (!nonzero) continue;
    for (int c = 0; c < cols; ++c) {
      if (work[c] == 0) continue;
      if (piv[c].empty()) {
        long long u = unit_for(work[c], n);
        for (int j = c; j < cols; ++j) work[j] = mod_norm(work[j] * u, n);
        piv[c] = work;
        break;
      }
      std::vector<long long>& p = piv[c];
      long long g = p[c]; // divides n by construction
      long long a = work[c];
      if (a % g == 0) {
        long long q = (a / g) % n;
        if (q)
          for (int j = c; j < cols; ++j) work[j] = mod_norm(work[j] - q * p[j], n);
      } else {
        long long gg, s, t;
        ext_gcd(g, a, gg, s, t);
        long long f1 = g / gg, f2 = a / gg;
        std::vector<long long> np(cols, 0);
        for (int j = c; j < cols; ++j) {
          long long pj = p[j], wj = work[j];
          np[j] = mod_norm(s % n * pj % n + t % n * wj % n, n);
          work[j] = mod_norm(f1 % n * wj % n - f2 % n * pj % n, n);
        }
        long long u = unit_for(np[c], n);
        if (u != 1)
          for (int j = c; j < cols; ++j) np[j] = mod_norm(np[j] * u, n);
        piv[c] = std::move(np);
      }
    }
  }

  int cnt = 0;
  for (int c = 0; c < cols; ++c)
    if (!piv[c].empty()) ++cnt;
  IntMat E(cnt, cols);
  int r = 0;
  for (int c = 0; c < cols; ++c)
    if (!piv[c].empty()) {
      for (int j = 0; j < cols; ++j) E.at(r, j) = make_int(piv[c][j]);
      ++r;
    }
  return E;
}

std::vector<Int> KernelLattice::coords(const std::vector<Int>& x) const {
  std::vector<Int> y = Vinv.apply(x);
  for (size_t i = 0; i < y.size(); ++i) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), y[i].get_mpz_t(), scale[i].get_mpz_t());
    if (r != 0) throw std::runtime_error("vector not in kernel lattice");
    y[i] = q;
  }
  return y;
}

bool KernelLattice::contains(const std::vector<Int>& x) const {
  std::vector<Int> y = Vinv.apply(x);
  for (size_t i = 0; i < y.size(); ++i)
    if (y[i] % scale[i] != 0) return false;
  return true;
}

KernelLattice kernel_mod_lattice(const std::vector<SparseRow>& rows, int m, long long n) {
  IntMat E = mod_echelon(rows, m, n);
  KernelLattice L;
  if (E.rows == 0) {
    L.basis = IntMat::identity(m);
    L.Vinv = IntMat::identity(m);
    L.scale.assign(m, Int(1));
    return L;
  }
  SnfResult s = snf(E);
  L.Vinv = s.Vinv;
  L.scale.assign(m, Int(1));
  Int N = make_int(n);
  for (int i = 0; i < s.rank; ++i) {
    Int g = gcd(s.diag[i], N);
    L.scale[i] = N / g;
  }
  L.basis = IntMat(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) L.basis.at(i, j) = s.V.at(i, j) * L.scale[j];
  return L;
}

std::optional<std::vector<Int>> solve_mod(const IntMat& A, const std::vector<Int>& b, const Int& n) {
  // solve over Z for [A | nI] z = b, return first A.cols coordinates
  IntMat M(A.rows, A.cols + A.rows);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    M.at(i, A.cols + i) = n;
  }
  SnfResult s = snf(M);
  std::vector<Int> c = s.U.apply(b);
  std::vector<Int> w(M.cols, Int(0));
  for (int i = 0; i < (int)c.size(); ++i) {
    if (i < s.rank) {
      Int q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c[i].get_mpz_t(), s.diag[i].get_mpz_t());
      if (r != 0) return std::nullopt;
      w[i] = q;
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Int> z = s.V.apply(w);
  std::vector<Int> x(z.begin(), z.begin() + A.cols);
  if (n > 0)
    for (auto& v : x) {
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    }
  return x;
}

} // namespace malle
