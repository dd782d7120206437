#include "malle/perm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace malle {

Perm::Perm(int n) : img(n) { std::iota(img.begin(), img.end(), 0); }

Perm Perm::identity(int n) { return Perm(n); }

Perm Perm::compose(const Perm& other) const {
  if (degree() != other.degree()) throw std::runtime_error("permutation degree mismatch");
  Perm r((int)img.size());
  for (int i = 0; i < degree(); ++i) r.img[i] = img[other.img[i]];
  return r;
}

Perm Perm::inverse() const {
  Perm r(degree());
  for (int i = 0; i < degree(); ++i) r.img[img[i]] = i;
  return r;
}

bool Perm::is_identity() const {
  for (int i = 0; i < degree(); ++i)
    if (img[i] != i) return false;
  return true;
}

int Perm::num_orbits() const {
  int n = degree(), cnt = 0;
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cnt;
    for (int j = i; !seen[j]; j = img[j]) seen[j] = 1;
  }
  return cnt;
}

int Perm::num_fixed_points() const {
  int c = 0;
  for (int i = 0; i < degree(); ++i)
    if (img[i] == i) ++c;
  return c;
}

int Perm::order() const {
  int n = degree();
  std::vector<char> seen(n, 0);
  long long ord = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = img[j]) seen[j] = 1, ++len;
    ord = std::lcm(ord, (long long)len);
  }
  return (int)ord;
}

Perm Perm::extended(int n) const {
  if (n < degree()) throw std::runtime_error("cannot shrink permutation");
  Perm r(n);
  for (int i = 0; i < degree(); ++i) r.img[i] = img[i];
  return r;
}

std::string Perm::cycle_string() const {
  int n = degree();
  std::vector<char> seen(n, 0);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || img[i] == i) {
      seen[i] = 1;
      continue;
    }
    out += '(';
    bool first = true;
    for (int j = i; !seen[j]; j = img[j]) {
      seen[j] = 1;
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

Perm parse_perm(const std::string& text, int degree) {
  std::string t;
  for (char c : text)
    if (!isspace((unsigned char)c)) t.push_back(c);
  if (t.empty()) throw std::runtime_error("empty permutation");
  std::vector<std::vector<int>> cycles;
  size_t i = 0;
  int maxpt = degree;
  while (i < t.size()) {
    if (t[i] != '(')
      throw std::runtime_error("expected '(' at position " + std::to_string(i) + " in \"" + text + "\"");
    ++i;
    std::vector<int> cyc;
    while (i < t.size() && t[i] != ')') {
      size_t j = i;
      while (j < t.size() && isdigit((unsigned char)t[j])) ++j;
      if (j == i)
        throw std::runtime_error("expected point at position " + std::to_string(i) + " in \"" + text + "\"");
      int pt = std::stoi(t.substr(i, j - i));
      if (pt <= 0) throw std::runtime_error("points are 1-based in \"" + text + "\"");
      cyc.push_back(pt - 1);
      maxpt = std::max(maxpt, pt);
      i = j;
      if (i < t.size() && t[i] == ',') ++i;
    }
    if (i >= t.size()) throw std::runtime_error("unterminated cycle in \"" + text + "\"");
    ++i; // ')'
    if (cyc.size() == 1)
      throw std::runtime_error("singleton cycle in \"" + text + "\"");
    cycles.push_back(cyc);
  }
  Perm p(maxpt);
  for (const auto& cyc : cycles)
    for (size_t k = 0; k < cyc.size(); ++k) {
      int from = cyc[k], to = cyc[(k + 1) % cyc.size()];
      if (p.img[from] != from)
        throw std::runtime_error("point " + std::to_string(from + 1) + " repeated in \"" + text + "\"");
      p.img[from] = to;
    }
  // bijectivity: repeated targets would leave some point unhit
  std::vector<char> hit(maxpt, 0);
  for (int v : p.img) {
    if (hit[v]) throw std::runtime_error("not a bijection: \"" + text + "\"");
    hit[v] = 1;
  }
  return p;
}

} // namespace malle
