#include "conic/numtheory.hpp"

#include <algorithm>

namespace conic {

// ---------------------------------------------------------------------------
// primality
// ---------------------------------------------------------------------------

static bool miller_rabin_witness(const Int& n, const Int& a) {
  // returns true if a proves n composite
  Int d = n - 1;
  int r = 0;
  while ((d & 1) == 0) { d >>= 1; ++r; }
  Int x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  static const int small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small_primes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  for (int p : small_primes) {
    if (miller_rabin_witness(n, p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// factoring
// ---------------------------------------------------------------------------

Factorization factor(Int n, std::int64_t trial_cap) {
  require(n > 0, Errc::internal, "factor() needs a positive argument");
  Factorization out;
  auto strip = [&](const Int& p) {
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  bool past_sqrt = false;
  for (std::int64_t d = 5; d <= trial_cap; d += 6) {
    if (Int(d) * d > n) { past_sqrt = true; break; }
    strip(Int(d));
    strip(Int(d + 2));
  }
  if (n > 1) {
    // cofactor is prime if trial division ran past sqrt(n), else test it
    if (past_sqrt || is_prime(n))
      out.emplace_back(n, 1);
    else
      fail(Errc::factoring_cap, "cofactor resists factoring at desk scale");
  }
  std::sort(out.begin(), out.end());
  return out;
}

int valuation(Int n, const Int& p) {
  check_internal(n != 0 && p > 1, "valuation domain");
  int e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

Int tau_from_factors(const Factorization& f) {
  Int t = 1;
  for (auto& [p, e] : f) t *= (e + 1);
  return t;
}

int omega_from_factors(const Factorization& f) { return static_cast<int>(f.size()); }

// ---------------------------------------------------------------------------
// modular square roots
// ---------------------------------------------------------------------------

int legendre_symbol(const Int& a, const Int& p) {
  Int r = pow_mod(mod_pos(a, p), (p - 1) / 2, p);
  if (r == 0) return 0;
  return (r == 1) ? 1 : -1;
}

Int sqrt_mod_prime(const Int& a0, const Int& p) {
  check_internal(p > 2 && is_prime(p), "sqrt_mod_prime wants an odd prime");
  Int a = mod_pos(a0, p);
  if (a == 0) return 0;
  check_internal(legendre_symbol(a, p) == 1, "sqrt_mod_prime of a non-residue");
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);

  // Tonelli-Shanks
  Int q = p - 1;
  int s = 0;
  while ((q & 1) == 0) { q >>= 1; ++s; }
  Int z = 2;
  while (legendre_symbol(z, p) != -1) ++z;
  Int m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p), r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    Int tt = t;
    Int i = 0;
    while (tt != 1) { tt = (tt * tt) % p; ++i; check_internal(i < m, "Tonelli-Shanks stalled"); }
    Int b = c;
    for (Int j = 0; j < m - i - 1; ++j) b = (b * b) % p;
    m = i;
    c = (b * b) % p;
    t = (t * c) % p;
    r = (r * b) % p;
  }
  return r;
}

Int sqrt_mod_prime_power(const Int& a, const Int& p, int k) {
  check_internal(k >= 1 && mod_pos(a, p) != 0, "sqrt_mod_prime_power domain");
  Int s = sqrt_mod_prime(a, p);
  Int pk = p;
  int have = 1;
  while (have < k) {
    // Newton step doubles the precision: s <- s - (s^2 - a) / (2s)
    int next = std::min(2 * have, k);
    Int mod = ipow(p, static_cast<unsigned>(next));
    Int num = mod_pos(s * s - a, mod);
    Int den = inv_mod(2 * s, mod);
    s = mod_pos(s - num * den, mod);
    have = next;
    pk = mod;
  }
  check_internal(mod_pos(s * s - a, ipow(p, static_cast<unsigned>(k))) == 0,
                 "Hensel sqrt failed");
  return s;
}

Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
  check_internal(gcd(m1, m2) == 1, "crt_pair wants coprime moduli");
  Int x, y;
  ext_gcd(m1, m2, x, y);  // x*m1 + y*m2 = 1
  Int m = m1 * m2;
  Int res = mod_pos(r1 * y * m2 + r2 * x * m1, m);
  check_internal(mod_pos(res - r1, m1) == 0 && mod_pos(res - r2, m2) == 0,
                 "crt_pair result check");
  return res;
}

}  // namespace conic
