#pragma once
#include <utility>
#include <vector>

#include "conic/bigint.hpp"

namespace conic {

// (prime, exponent) pairs, primes ascending.
using Factorization = std::vector<std::pair<Int, int>>;

// Miller-Rabin with a fixed base set that is deterministic for all n < 3.3e24;
// desk-scale inputs here are far below that.
bool is_prime(const Int& n);

// Trial division up to trial_cap, then primality test on the cofactor.
// Throws Errc::factoring_cap if a composite cofactor survives.
Factorization factor(Int n, std::int64_t trial_cap = 10'000'000);

int valuation(Int n, const Int& p);

Int tau_from_factors(const Factorization& f);       // divisor count
int omega_from_factors(const Factorization& f);     // distinct prime count

// Legendre symbol (a/p) for odd prime p: 1, -1, or 0.
int legendre_symbol(const Int& a, const Int& p);

// Square root of a quadratic residue a mod odd prime p (Tonelli-Shanks).
Int sqrt_mod_prime(const Int& a, const Int& p);

// s with s^2 = a (mod p^k), odd prime p, p does not divide a, (a/p) = 1.
Int sqrt_mod_prime_power(const Int& a, const Int& p, int k);

// x = r1 (mod m1), x = r2 (mod m2) for coprime moduli; result mod m1*m2.
Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2);

}  // namespace conic
