#include "doctest.h"

#include <random>

#include "conic/error.hpp"
#include "conic/numtheory.hpp"

using namespace conic;

TEST_CASE("integer helpers") {
  SUBCASE("floor and nearest division") {
    // Int arguments keep the calls on conic::fdiv; bare int literals would
    // drift to the C23 narrowing fdiv(double, double) from math.h
    CHECK(fdiv(Int(7), Int(2)) == 3);
    CHECK(fdiv(Int(-7), Int(2)) == -4);
    CHECK(fdiv(Int(7), Int(-2)) == -4);
    CHECK(fdiv(Int(-7), Int(-2)) == 3);

    CHECK(rdiv(7, 2) == 3);    // 3.5 rounds down on the tie
    CHECK(rdiv(9, 2) == 4);    // 4.5 rounds down on the tie
    CHECK(rdiv(-7, 2) == -4);  // -3.5 ties toward -inf
    CHECK(rdiv(8, 3) == 3);
    CHECK(rdiv(-8, 3) == -3);
    CHECK(rdiv(10, 5) == 2);
  }

  SUBCASE("residues") {
    CHECK(mod_pos(-1, 5) == 4);
    CHECK(mod_pos(13, 5) == 3);
    CHECK(mod_sym(13, 5) == -2);
    CHECK(mod_sym(12, 5) == 2);
    CHECK(mod_sym(-13, 5) == 2);
    CHECK(mod_sym(5, 10) == 5);  // halfway point keeps the positive sign
  }

  SUBCASE("extended gcd and modular inverse") {
    Int x, y;
    CHECK(ext_gcd(240, 46, x, y) == 2);
    CHECK(240 * x + 46 * y == 2);
    CHECK(ext_gcd(0, -7, x, y) == 7);
    CHECK(-7 * y == 7);

    CHECK(inv_mod(3, 7) == 5);
    CHECK(mod_pos(inv_mod(100, 977861) * 100, 977861) == 1);
    CHECK_THROWS_AS(inv_mod(6, 9), Error);
  }

  SUBCASE("square roots and squares") {
    CHECK(isqrt_floor(0) == 0);
    CHECK(isqrt_floor(15) == 3);
    CHECK(isqrt_floor(16) == 4);
    CHECK(isqrt_floor(Int("123456789012345678901234567890")) ==
          Int("351364182882014"));
    Int root;
    CHECK(is_square(Int(144), &root));
    CHECK(root == 12);
    CHECK_FALSE(is_square(Int(145), &root));
    CHECK_FALSE(is_square(Int(-4), &root));
    CHECK(is_square(Int(0), &root));
    CHECK(root == 0);
  }

  SUBCASE("power helpers") {
    CHECK(ipow(Int(3), 5) == 243);
    CHECK(ipow(Int(-2), 3) == -8);
    CHECK(ipow(Int(7), 0) == 1);
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(pow_mod(5, 0, 7) == 1);
  }
}

TEST_CASE("primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(977861));
  CHECK(is_prime(Int("1000000000000066600000000000001")));  // 31-digit prime
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(-7));
  CHECK_FALSE(is_prime(561));      // Carmichael
  CHECK_FALSE(is_prime(41041));    // Carmichael
  CHECK_FALSE(is_prime(977863));   // 43 * 22741
  CHECK_FALSE(is_prime(Int(1000003) * Int(1000033)));

  // against a sieve up to 1000
  std::vector<bool> composite(1001, false);
  for (int p = 2; p <= 1000; ++p)
    for (int q = 2 * p; q <= 1000; q += p) composite[q] = true;
  for (int n = 2; n <= 1000; ++n) CHECK(is_prime(n) == !composite[n]);
}

TEST_CASE("factoring") {
  SUBCASE("small and structured inputs") {
    Factorization f = factor(300);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<Int, int>{2, 2});
    CHECK(f[1] == std::pair<Int, int>{3, 1});
    CHECK(f[2] == std::pair<Int, int>{5, 2});

    CHECK(factor(1).empty());
    CHECK(factor(977861) == Factorization{{977861, 1}});
    CHECK(factor(1024) == Factorization{{2, 10}});
    CHECK_THROWS_AS(factor(0), Error);
    CHECK_THROWS_AS(factor(-6), Error);
  }

  SUBCASE("large prime cofactor after trial division") {
    Int p("32416190071");  // prime near 3.2e10, above the trial cap
    CHECK(factor(6 * p) == Factorization{{2, 1}, {3, 1}, {p, 1}});
  }

  SUBCASE("cap on composite cofactors with no small divisor") {
    Int p("32416190071"), q("32416187567");
    try {
      factor(p * q);
      FAIL("expected a factoring failure");
    } catch (const Error& e) {
      CHECK(e.code == Errc::factoring_cap);
    }
  }

  SUBCASE("round trip on random values") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> d(2, 5'000'000);
    for (int t = 0; t < 40; ++t) {
      Int n = d(rng);
      Factorization f = factor(n);
      Int prod = 1;
      Int last = 1;
      for (auto& [p, e] : f) {
        CHECK(is_prime(p));
        CHECK(p > last);
        last = p;
        prod *= ipow(p, e);
      }
      CHECK(prod == n);
    }
  }
}

TEST_CASE("valuation, divisor count, distinct primes") {
  CHECK(valuation(48, 2) == 4);
  CHECK(valuation(48, 3) == 1);
  CHECK(valuation(48, 5) == 0);
  CHECK(valuation(-48, 2) == 4);

  Factorization f = factor(360);  // 2^3 3^2 5
  CHECK(tau_from_factors(f) == 24);
  CHECK(omega_from_factors(f) == 3);
  CHECK(tau_from_factors({}) == 1);
  CHECK(omega_from_factors({}) == 0);
  CHECK(tau_from_factors(factor(977861)) == 2);
}

TEST_CASE("Legendre symbol") {
  CHECK(legendre_symbol(1, 7) == 1);
  CHECK(legendre_symbol(2, 7) == 1);   // 3^2 = 2 (mod 7)
  CHECK(legendre_symbol(3, 7) == -1);
  CHECK(legendre_symbol(0, 7) == 0);
  CHECK(legendre_symbol(14, 7) == 0);
  CHECK(legendre_symbol(-1, 7) == -1);  // p = 3 (mod 4)
  CHECK(legendre_symbol(-1, 13) == 1);  // p = 1 (mod 4)

  // Euler criterion cross-check
  for (Int p : {Int(11), Int(97), Int(977861)}) {
    for (Int a = 1; a < 30; ++a) {
      if (a % p == 0) continue;
      Int e = pow_mod(a, (p - 1) / 2, p);
      int s = (e == 1) ? 1 : -1;
      CHECK(legendre_symbol(a, p) == s);
    }
  }
}

TEST_CASE("modular square roots") {
  SUBCASE("odd primes, both congruence classes mod 4") {
    for (Int p : {Int(7), Int(11), Int(13), Int(17), Int(101), Int(977861)}) {
      int found = 0;
      for (Int a = 1; a < 50; ++a) {
        if (legendre_symbol(a, p) != 1) continue;
        Int s = sqrt_mod_prime(a, p);
        CHECK(mod_pos(s * s - a, p) == 0);
        CHECK(s >= 0);
        CHECK(s < p);
        ++found;
      }
      CHECK(found > 0);
    }
  }

  SUBCASE("prime powers by Hensel lifting") {
    struct Case { Int a, p; int k; };
    // 152399025 = 12345^2, a guaranteed residue mod the large prime
    for (const Case& c : {Case{2, 7, 5}, Case{5, 11, 4}, Case{152399025, 977861, 2}}) {
      Int m = ipow(c.p, c.k);
      Int s = sqrt_mod_prime_power(c.a, c.p, c.k);
      CHECK(mod_pos(s * s - c.a, m) == 0);
      CHECK(s >= 0);
      CHECK(s < m);
    }
  }
}

TEST_CASE("Chinese remainder for coprime moduli") {
  Int x = crt_pair(2, 3, 3, 5);
  CHECK(x == 8);
  x = crt_pair(1, 4, 6, 7);
  CHECK(mod_pos(x, 4) == 1);
  CHECK(mod_pos(x, 7) == 6);
  CHECK(x >= 0);
  CHECK(x < 28);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(1, 400);
  for (int t = 0; t < 40; ++t) {
    Int m1 = d(rng), m2 = d(rng);
    if (gcd(m1, m2) != 1) continue;
    Int r1 = Int(d(rng)) % m1, r2 = Int(d(rng)) % m2;
    Int r = crt_pair(r1, m1, r2, m2);
    CHECK(mod_pos(r, m1) == r1);
    CHECK(mod_pos(r, m2) == r2);
    CHECK(r >= 0);
    CHECK(r < m1 * m2);
  }
}
