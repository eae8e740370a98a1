#pragma once

#include <gmpxx.h>

#include <string>

namespace fop {

// Exact rational scalar used everywhere in the core. No floating point
// enters any solver path; doubles appear only in LP-file approximations.
using Rat = mpq_class;
using Int = mpz_class;

Rat rat_floor(const Rat& r);
Rat rat_ceil(const Rat& r);
// r - floor(r), always in [0, 1).
Rat rat_frac(const Rat& r);
bool rat_is_integer(const Rat& r);

// num/den in canonical form (mpq_class(num, den) alone does not reduce).
Rat rat_make(long num, long den);

// Accepts "3", "-3", "1/2", "-7/4", "0.25". Throws std::invalid_argument.
Rat rat_parse(const std::string& s);
// Canonical text: integer "n" or fraction "p/q" with q > 1.
std::string rat_str(const Rat& r);
// Decimal approximation for LP-file bodies.
std::string rat_decimal(const Rat& r);

Int lcm(const Int& a, const Int& b);

}  // namespace fop
