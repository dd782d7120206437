#include "malle/rat.hpp"

#include <algorithm>

namespace malle {

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!isspace((unsigned char)c)) t.push_back(c);
  if (t.empty()) throw std::runtime_error("empty rational literal");
  try {
    Rat q;
    if (q.set_str(t, 10) != 0) throw std::runtime_error("bad rational literal: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw std::runtime_error("zero denominator: " + s);
    return q;
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("bad rational literal: " + s);
  }
}

std::string rat_str(const Rat& q) { return q.get_str(); }

Rat rat_pow(const Rat& q, long e) {
  if (e == 0) return Rat(1);
  bool neg = e < 0;
  unsigned long n = neg ? (unsigned long)(-e) : (unsigned long)e;
  Rat base = q;
  if (neg) {
    if (base == 0) throw std::runtime_error("0^negative");
    base = 1 / base;
  }
  Rat acc(1);
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

Rat mod1(const Rat& q) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rat r = q - Rat(fl);
  return r;
}

long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw std::runtime_error("integer out of long range");
  return z.get_si();
}

double to_double(const Rat& q) { return q.get_d(); }

} // namespace malle
