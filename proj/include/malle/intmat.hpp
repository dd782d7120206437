#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "malle/rat.hpp"

namespace malle {

// Dense arbitrary-precision integer matrix.
struct IntMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
  static IntMat identity(int n);

  Int& at(int i, int j) { return a[(size_t)i * cols + j]; }
  const Int& at(int i, int j) const { return a[(size_t)i * cols + j]; }

  IntMat mul(const IntMat& o) const;
  IntMat transpose() const;
  std::vector<Int> apply(const std::vector<Int>& x) const; // this * x
};

// Smith normal form U*A*V = D with U, V unimodular; D diagonal with a
// divisibility chain d1 | d2 | ... Also returns Uinv, Vinv.
struct SnfResult {
  IntMat D, U, Uinv, V, Vinv;
  int rank = 0;                // number of nonzero diagonal entries
  std::vector<Int> diag;       // min(rows,cols) entries
};

SnfResult snf(const IntMat& A);

// Kernel of A over Z: basis vectors as columns.
IntMat integer_kernel(const IntMat& A);

// Finite abelian group as invariant factors d1 | d2 | ... (each > 1),
// plus an optional free rank.
struct FinAbGroup {
  std::vector<Int> factors;
  int free_rank = 0;

  Int order() const {
    Int o = 1;
    for (const auto& d : factors) o *= d;
    return o;
  }
  bool trivial() const { return factors.empty() && free_rank == 0; }
  std::string str() const;
  Int exponent() const { return factors.empty() ? Int(1) : factors.back(); }
};

// Presentation of Z^m / column-span(R).
struct QuotientZm {
  int m = 0;
  FinAbGroup group;
  IntMat U, Uinv;               // from SNF of R
  std::vector<Int> diag;        // full diagonal (length m), 0 = free
  std::vector<int> live;        // indices i with diag[i] != 1 (nontrivial factors)

  // Coordinates of x in the quotient: (U x)_i mod diag[i], for i in live.
  std::vector<Int> coords(const std::vector<Int>& x) const;
  // Representative in Z^m of the i-th live generator.
  std::vector<Int> generator(int k) const;
};

QuotientZm quotient_presentation(const IntMat& R, int m);

// Presentation of Z^m / (column-span(R) + n Z^m) computed entirely mod n
// (word-size arithmetic with gcd pivoting); requires entries already reduced.
QuotientZm quotient_presentation_modn(const IntMat& R, int m, long long n);

// Sparse row for modular elimination.
struct SparseRow {
  std::vector<std::pair<int, long long>> entries; // (col, value)
};

// Row echelon over Z/n with gcd pivots; rows are equations r.x = 0 (mod n).
// Returns the echelon rows as a dense IntMat (rowspace over Z/n preserved).
IntMat mod_echelon(const std::vector<SparseRow>& rows, int cols, long long n);

// Lattice L = { x in Z^m : E x = 0 (mod n) } for an equation matrix E.
// Basis returned as columns of an m x m matrix, together with an exact
// inverse action: coords(x) integral iff x in L.
struct KernelLattice {
  IntMat basis;                    // m x m, columns are basis vectors
  IntMat Vinv;                     // from SNF of E
  std::vector<Int> scale;          // basis = V * diag(scale)
  std::vector<Int> coords(const std::vector<Int>& x) const; // throws if not in L
  bool contains(const std::vector<Int>& x) const;
};

KernelLattice kernel_mod_lattice(const std::vector<SparseRow>& rows, int m, long long n);

// Solve A x = b (mod n); returns a solution if one exists.
std::optional<std::vector<Int>> solve_mod(const IntMat& A, const std::vector<Int>& b, const Int& n);

} // namespace malle
