#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "conic/error.hpp"

namespace conic {

// All exact arithmetic runs on arbitrary-precision integers. Hot loops that
// provably fit in 64 bits may switch to an int64 kernel, but every public
// result is an Int.
using Int = boost::multiprecision::cpp_int;

inline int sgn(const Int& a) { return a == 0 ? 0 : (a < 0 ? -1 : 1); }
inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline bool fits_int64(const Int& a) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  return a >= lo && a <= hi;
}

inline std::int64_t to_int64(const Int& a) {
  check_internal(fits_int64(a), "value does not fit in int64");
  return a.convert_to<std::int64_t>();
}

inline double to_double(const Int& a) { return a.convert_to<double>(); }

// Floor square root for n >= 0.
inline Int isqrt_floor(const Int& n) {
  check_internal(n >= 0, "isqrt of negative value");
  Int r = boost::multiprecision::sqrt(n);
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  Int r = isqrt_floor(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

// Floor division (quotient rounded toward -infinity), b != 0.
inline Int fdiv(const Int& a, const Int& b) {
  check_internal(b != 0, "division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nearest-integer division; ties round toward -infinity. b != 0.
inline Int rdiv(const Int& a, const Int& b) {
  Int bb = iabs(b);
  Int aa = (b < 0) ? Int(-a) : a;
  return fdiv(2 * aa + bb - 1, 2 * bb);
}

inline Int mod_pos(const Int& a, const Int& m) {
  check_internal(m > 0, "modulus must be positive");
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Symmetric residue in (-m/2, m/2].
inline Int mod_sym(const Int& a, const Int& m) {
  Int r = mod_pos(a, m);
  if (2 * r > m) r -= m;
  return r;
}

// g = gcd(a, b) = a*x + b*y, g >= 0.
inline Int ext_gcd(Int a, Int b, Int& x, Int& y) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;  // truncated is fine here; invariants hold for any quotient
    Int t = a - q * b; a = b; b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
  x = x0; y = y0;
  return a;
}

inline Int inv_mod(const Int& a, const Int& m) {
  check_internal(m > 0, "modulus must be positive");
  if (m == 1) return 0;
  Int x, y;
  Int g = ext_gcd(mod_pos(a, m), m, x, y);
  check_internal(g == 1, "modular inverse of non-unit");
  return mod_pos(x, m);
}

inline Int pow_mod(Int base, Int exp, const Int& m) {
  check_internal(exp >= 0 && m > 0, "pow_mod domain");
  if (m == 1) return 0;
  Int r = 1;
  base = mod_pos(base, m);
  while (exp > 0) {
    if ((exp & 1) != 0) r = (r * base) % m;
    base = (base * base) % m;
    exp >>= 1;
  }
  return r;
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int ipow(Int base, unsigned e) {
  Int r = 1;
  while (e) { if (e & 1) r *= base; base *= base; e >>= 1; }
  return r;
}

}  // namespace conic
