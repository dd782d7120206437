#include <doctest.h>

#include <algorithm>
#include <random>

#include "malle/intmat.hpp"

using namespace malle;

namespace {
IntMat from_rows(const std::vector<std::vector<long>>& rows) {
  IntMat m((int)rows.size(), (int)rows[0].size());
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

bool is_identity(const IntMat& m) {
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

void check_snf(const IntMat& A) {
  SnfResult s = snf(A);
  // U A V = D
  IntMat lhs = s.U.mul(A).mul(s.V);
  CHECK(lhs.a == s.D.a);
  // transforms invertible over Z
  CHECK(is_identity(s.U.mul(s.Uinv)));
  CHECK(is_identity(s.V.mul(s.Vinv)));
  // divisibility chain
  for (int i = 0; i + 1 < (int)s.diag.size(); ++i) {
    if (s.diag[i + 1] == 0) continue;
    CHECK(s.diag[i] != 0);
    CHECK(s.diag[i + 1] % s.diag[i] == 0);
  }
}
} // namespace

TEST_CASE("snf basics") {
  check_snf(IntMat::identity(3));
  SnfResult s = snf(IntMat::identity(3));
  CHECK(s.diag == std::vector<Int>{1, 1, 1});

  IntMat d = from_rows({{4, 0}, {0, 6}});
  SnfResult s2 = snf(d);
  CHECK(s2.diag == std::vector<Int>{2, 12});
  check_snf(d);
}

TEST_CASE("snf on random matrices") {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    IntMat A(5, 7);
    for (auto& v : A.a) v = (long)(rng() % 19) - 9;
    check_snf(A);
    // invariant factors stable under row/column shuffles
    SnfResult s1 = snf(A);
    IntMat B = A;
    std::vector<int> pr{0, 1, 2, 3, 4}, pc{0, 1, 2, 3, 4, 5, 6};
    std::shuffle(pr.begin(), pr.end(), rng);
    std::shuffle(pc.begin(), pc.end(), rng);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 7; ++j) B.at(i, j) = A.at(pr[i], pc[j]);
    CHECK(snf(B).diag == s1.diag);
  }
}

TEST_CASE("integer kernel") {
  IntMat A = from_rows({{1, 2, 3}, {2, 4, 6}});
  IntMat K = integer_kernel(A);
  CHECK(K.cols == 2);
  for (int j = 0; j < K.cols; ++j) {
    std::vector<Int> x(3);
    for (int i = 0; i < 3; ++i) x[i] = K.at(i, j);
    for (const auto& v : A.apply(x)) CHECK(v == 0);
  }
}

TEST_CASE("quotient presentation") {
  IntMat R = from_rows({{2, 0}, {0, 3}});
  QuotientZm q = quotient_presentation(R, 2);
  CHECK(q.group.order() == 6);
  CHECK(q.group.factors == std::vector<Int>{6});
  CHECK(q.group.free_rank == 0);

  IntMat R2 = from_rows({{2, 0}, {0, 0}});
  QuotientZm q2 = quotient_presentation(R2, 2);
  CHECK(q2.group.free_rank == 1);
  CHECK(q2.group.factors == std::vector<Int>{2});
}

TEST_CASE("kernel mod n lattice") {
  // x with 2x = 0 mod 4 -> x in 2Z + 4Z = 2Z
  std::vector<SparseRow> rows(1);
  rows[0].entries = {{0, 2}};
  KernelLattice L = kernel_mod_lattice(rows, 1, 4);
  CHECK(L.contains({Int(2)}));
  CHECK(!L.contains({Int(1)}));
  CHECK(L.contains({Int(4)}));

  // two variables: x + y = 0 mod 6
  std::vector<SparseRow> r2(1);
  r2[0].entries = {{0, 1}, {1, 1}};
  KernelLattice L2 = kernel_mod_lattice(r2, 2, 6);
  CHECK(L2.contains({Int(1), Int(5)}));
  CHECK(L2.contains({Int(2), Int(4)}));
  CHECK(!L2.contains({Int(1), Int(1)}));
}

TEST_CASE("solve mod") {
  IntMat A = from_rows({{2, 0}, {0, 3}});
  auto s = solve_mod(A, {Int(2), Int(3)}, Int(6));
  REQUIRE(s.has_value());
  CHECK((A.apply(*s)[0] - 2) % 6 == 0);
  CHECK((A.apply(*s)[1] - 3) % 6 == 0);
  auto none = solve_mod(A, {Int(1), Int(0)}, Int(6));
  CHECK(!none.has_value());
}

TEST_CASE("mod echelon spans the row space") {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    long long n = 12;
    int m = 6;
    std::vector<SparseRow> rows;
    for (int i = 0; i < 10; ++i) {
      SparseRow r;
      for (int j = 0; j < m; ++j) {
        long long v = rng() % n;
        if (v) r.entries.push_back({j, v});
      }
      rows.push_back(r);
    }
    KernelLattice L = kernel_mod_lattice(rows, m, n);
    // every kernel basis vector satisfies all rows mod n
    for (int j = 0; j < m; ++j) {
      std::vector<Int> x(m);
      for (int i = 0; i < m; ++i) x[i] = L.basis.at(i, j);
      for (const auto& r : rows) {
        Int dot(0);
        for (auto [c, v] : r.entries) dot += x[c] * make_int(v);
        CHECK(dot % make_int(n) == 0);
      }
    }
  }
}
