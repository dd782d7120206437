#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace malle {

using Rat = mpq_class;
using Int = mpz_class;

// Mathematical precondition failures (CLI exit code 2).
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "35/648", "-319/3456", "7" (spaces allowed around '/').
Rat parse_rat(const std::string& s);

std::string rat_str(const Rat& q);

// q^e for integer e (e may be negative; q != 0 then).
Rat rat_pow(const Rat& q, long e);

// Reduce q into [0,1) modulo Z.
Rat mod1(const Rat& q);

// Least common multiple of denominators handled upstream; here: is q an integer?
inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

long to_long(const Int& z);

// mpz_class lacks a long long constructor; 64-bit long on this platform.
inline Int make_int(long long v) { return Int(static_cast<long>(v)); }
inline Rat make_rat(long long v) { return Rat(static_cast<long>(v)); }

double to_double(const Rat& q);

} // namespace malle
