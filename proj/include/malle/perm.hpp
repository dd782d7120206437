#pragma once

#include <string>
#include <vector>

namespace malle {

// Permutation of {0..n-1} stored as image table. Text form is cycle notation
// with 1-based points: "(1,2)(3,4)", identity "()".
struct Perm {
  std::vector<int> img;

  Perm() = default;
  explicit Perm(int n);
  static Perm identity(int n);

  int degree() const { return (int)img.size(); }
  int operator()(int i) const { return img[i]; }
  bool operator==(const Perm& o) const { return img == o.img; }
  bool operator<(const Perm& o) const { return img < o.img; }

  Perm compose(const Perm& other) const; // (this*other)(x) = this(other(x))
  Perm inverse() const;
  bool is_identity() const;
  int num_orbits() const;
  int num_fixed_points() const;
  int order() const;

  // Pads to a larger degree (new points fixed).
  Perm extended(int n) const;

  std::string cycle_string() const; // 1-based cycle notation
};

// Throws std::runtime_error naming the offending token on malformed input.
Perm parse_perm(const std::string& text, int degree = 0);

} // namespace malle
