#include "fop/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fop {

Rat rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rat(q);
}

Rat rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rat(q);
}

Rat rat_frac(const Rat& r) { return r - rat_floor(r); }

bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

Rat rat_make(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0 || digits.empty())
      throw std::invalid_argument("bad decimal literal: " + s);
    for (size_t i = 0; i < digits.size(); ++i) {
      char c = digits[i];
      if (!(std::isdigit(static_cast<unsigned char>(c)) ||
            (i == 0 && (c == '-' || c == '+'))))
        throw std::invalid_argument("bad decimal literal: " + s);
    }
    Int num(digits, 10);
    Int den(1);
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  try {
    Rat r(s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string rat_decimal(const Rat& r) {
  if (rat_is_integer(r)) return r.get_num().get_str();
  // 12 digits is plenty for a human-readable approximation; the exact
  // value always rides alongside in a comment.
  mpf_class f(r, 64);
  std::ostringstream os;
  os.precision(12);
  os << f;
  return os.str();
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Rat rat_gcd(const Rat& a, const Rat& b) {
  if (a == 0) return Rat(abs(b));
  if (b == 0) return Rat(abs(a));
  Int n;
  Int x(a.get_num() * b.get_den());
  Int y(b.get_num() * a.get_den());
  mpz_gcd(n.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return Rat(n) / Rat(Int(a.get_den() * b.get_den()));
}

}  // namespace fop
