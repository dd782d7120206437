#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "malle/perm.hpp"
#include "malle/rat.hpp"

namespace malle {

struct ClassPartition {
  std::vector<std::vector<int>> classes; // members sorted; classes ordered by least member
  std::vector<int> class_of;
  int identity_class = 0;

  int count() const { return (int)classes.size(); }
  int rep(int c) const { return classes[c][0]; }
  int size(int c) const { return (int)classes[c].size(); }
};

// One-dimensional character with values in Q/Z, given per element, in [0,1).
struct Character {
  std::vector<Rat> val;
  bool is_trivial() const {
    for (const auto& v : val)
      if (v != 0) return false;
    return true;
  }
  bool operator==(const Character& o) const { return val == o.val; }
};

struct CharacterGroup {
  std::vector<Character> all; // index 0 = trivial
  int order() const { return (int)all.size(); }
};

// Finite group backed by a Cayley table. Elements are indexed 0..n-1;
// for permutation groups the index order is lexicographic on images,
// which pins every downstream representative and report.
class FiniteGroup {
 public:
  static FiniteGroup from_generators(const std::vector<Perm>& gens, int size_cap = 10000);
  static FiniteGroup from_cayley(std::vector<int> table, int n);

  int order() const { return n_; }
  int id() const { return e_; }
  int mul(int a, int b) const { return mul_[(size_t)a * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); } // g x g^-1
  int pow(int a, long long k) const;
  int order_of(int a) const { return order_[a]; }
  long long exponent() const { return exponent_; }
  const std::vector<int>& element_orders() const { return order_; }

  bool has_perms() const { return !perms_.empty(); }
  const Perm& perm(int a) const { return perms_[a]; }
  int degree() const { return perms_.empty() ? 0 : perms_[0].degree(); }
  std::string element_name(int a) const;
  // index of the element with this permutation (throws if absent)
  int index_of(const Perm& p) const;

  const ClassPartition& classes() const;

  std::vector<int> center() const;
  std::vector<int> centralizer(int g) const;
  std::vector<int> commutator_elements() const;
  long long m_torsion_count(long long m) const;

  struct Subgroup {
    std::shared_ptr<FiniteGroup> group;
    std::vector<int> to_parent;   // sub index -> parent index
    std::vector<int> from_parent; // parent index -> sub index or -1
    int order() const { return group->order(); }
  };

  Subgroup subgroup_from_elements(std::vector<int> elems) const; // must be closed
  Subgroup subgroup_generated(const std::vector<int>& gens) const;
  bool is_normal(const std::vector<int>& elems) const;

  struct Quotient {
    std::shared_ptr<FiniteGroup> group;
    std::vector<int> proj; // parent index -> quotient index
  };
  Quotient quotient(const Subgroup& N) const; // throws if N not normal

  Quotient abelianization() const;
  CharacterGroup one_dim_characters() const;

  // A Sylow p-subgroup (deterministic), as a sorted element list.
  std::vector<int> sylow_subgroup(long long p) const;

 private:
  FiniteGroup() = default;
  void finalize(); // inv, orders, exponent, axiom checks

  int n_ = 0, e_ = 0;
  std::vector<int> mul_, inv_, order_;
  long long exponent_ = 1;
  std::vector<Perm> perms_;
  mutable std::optional<ClassPartition> classes_;
};

// Double coset representatives S\G/S for a subgroup given as an element list.
std::vector<int> double_coset_reps(const FiniteGroup& G, const std::vector<int>& S);

} // namespace malle
