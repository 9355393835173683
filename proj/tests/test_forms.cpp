#include "doctest.h"

#include <functional>

#include "conic/error.hpp"
#include "conic/forms.hpp"
#include "helpers.hpp"

using namespace conic;
using testutil::Rng;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return Errc::internal;  // placeholder meaning "did not throw"
}

}  // namespace

TEST_CASE("parsing and normalization") {
  SUBCASE("plain six-coefficient input") {
    TernaryForm q = parse_form("-61 0 -22 -38 99 39");
    CHECK(q == TernaryForm{-61, 0, -22, -38, 99, 39});
    CHECK(parse_form("0 0 1 -1 0 0") == split_form());
    CHECK(parse_form("  0   0  +1  -1 0\t0 ") == split_form());
  }

  SUBCASE("sign flips so the determinant becomes positive") {
    // 0 0 -1 1 0 0 has determinant -1; the negated form is the split form
    CHECK(parse_form("0 0 -1 1 0 0") == split_form());
    CHECK(stats(parse_form("-1 0 0 -1 0 1")).delta > 0);
  }

  SUBCASE("malformed inputs") {
    CHECK(code_of([] { parse_form("1 2 3"); }) == Errc::malformed_input);
    CHECK(code_of([] { parse_form("1 2 3 4 5 6 7"); }) == Errc::malformed_input);
    CHECK(code_of([] { parse_form("1 2 3 4 5 x"); }) == Errc::malformed_input);
    CHECK(code_of([] { parse_form("1 2 3 4 5 6.5"); }) == Errc::malformed_input);
    CHECK(code_of([] { parse_form(""); }) == Errc::malformed_input);
    CHECK(code_of([] { parse_form("1 2 3 4 5 -"); }) == Errc::malformed_input);
  }

  SUBCASE("degenerate inputs") {
    CHECK(code_of([] { parse_form("0 0 0 0 0 0"); }) == Errc::degenerate);
    // rank-deficient: (x1 + x2)^2
    CHECK(code_of([] { parse_form("1 2 0 1 0 0"); }) == Errc::degenerate);
  }

  SUBCASE("content handling") {
    CHECK(code_of([] { parse_form("0 0 2 -2 0 0"); }) == Errc::degenerate);
    CHECK(parse_form("0 0 2 -2 0 0", true) == split_form());
  }

  SUBCASE("round trip through text") {
    TernaryForm q = testutil::sample_form_61();
    CHECK(parse_form(form_to_text(q)) == q);
    CHECK(form_to_text(split_form()) == "0 0 1 -1 0 0");
  }
}

TEST_CASE("statistics of explicit forms") {
  SUBCASE("split form") {
    FormStats s = stats(split_form());
    CHECK(s.delta == 1);
    CHECK(s.norm_sq == 6);
    CHECK(s.gram.a[0][2] == 1);
    CHECK(s.gram.a[1][1] == -2);
    CHECK(det3(s.gram) == 2);
  }

  SUBCASE("sample indefinite form") {
    FormStats s = stats(testutil::sample_form_61());
    CHECK(s.delta == 977861);
    // 4*61^2 + 2*22^2 + 4*38^2 + 2*99^2 + 4*39^2
    CHECK(s.norm_sq == 47314);
    CHECK(s.aspect_ratio > 2.0);
  }

  SUBCASE("aspect ratio is at least 2, exactly norm_sq^3 >= 4 delta^2") {
    Rng rng(61);
    int tested = 0;
    while (tested < 40) {
      TernaryForm raw{testutil::rand_int(rng, -9, 9), testutil::rand_int(rng, -9, 9),
                      testutil::rand_int(rng, -9, 9), testutil::rand_int(rng, -9, 9),
                      testutil::rand_int(rng, -9, 9), testutil::rand_int(rng, -9, 9)};
      Int g = content(raw);
      if (g == 0) continue;
      raw = divide_form_exact(raw, g);
      FormStats s = stats(raw);
      if (s.delta == 0) continue;
      ++tested;
      CHECK(s.norm_sq * s.norm_sq * s.norm_sq >= 4 * s.delta * s.delta);
    }
  }
}

TEST_CASE("evaluation") {
  TernaryForm q = testutil::sample_form_61();
  CHECK(evaluate(q, Vec3(1, 0, -1)) == 0);
  CHECK(evaluate(q, Vec3(3426, 3339, 3047)) == 0);
  CHECK(evaluate(q, Vec3(1, 0, 0)) == -61);
  CHECK(evaluate(q, Vec3(1, 1, 1)) == 17);  // sum of all six coefficients

  SUBCASE("split form vanishes on the square parametrization") {
    for (int u = -6; u <= 6; ++u)
      for (int v = -6; v <= 6; ++v)
        CHECK(evaluate(split_form(), Vec3(u * u, u * v, v * v)) == 0);
  }

  SUBCASE("size bound 4 q(x)^2 <= norm_sq * |x|^4") {
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
      TernaryForm r{testutil::rand_int(rng, -50, 50), testutil::rand_int(rng, -50, 50),
                    testutil::rand_int(rng, -50, 50), testutil::rand_int(rng, -50, 50),
                    testutil::rand_int(rng, -50, 50), testutil::rand_int(rng, -50, 50)};
      Vec3 x(testutil::rand_int(rng, -30, 30), testutil::rand_int(rng, -30, 30),
             testutil::rand_int(rng, -30, 30));
      Int v = evaluate(r, x);
      Int n2 = norm_sq(x);
      CHECK(4 * v * v <= stats(r).norm_sq * n2 * n2);
    }
  }
}

TEST_CASE("change of variables") {
  TernaryForm q = testutil::sample_form_61();

  SUBCASE("identity is neutral") {
    CHECK(transform(q, Mat3::identity()) == q);
  }

  SUBCASE("explicit matrices reach the scaled split form") {
    TernaryForm target{0, 0, 977861, -977861, 0, 0};
    CHECK(transform(q, testutil::sample61_witness_1()) == target);
    CHECK(transform(q, testutil::sample61_witness_2()) == target);
  }

  SUBCASE("determinant law delta(q o M) = det(M)^2 delta(q)") {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
      TernaryForm r{testutil::rand_int(rng, -7, 7), testutil::rand_int(rng, -7, 7),
                    testutil::rand_int(rng, -7, 7), testutil::rand_int(rng, -7, 7),
                    testutil::rand_int(rng, -7, 7), testutil::rand_int(rng, -7, 7)};
      Mat3 m = testutil::rand_mat(rng, -5, 5);
      Int d = det3(m);
      CHECK(stats(transform(r, m)).delta == d * d * stats(r).delta);
    }
  }

  SUBCASE("composition is contravariant") {
    Rng rng(29);
    Mat3 a = testutil::rand_mat(rng, -4, 4);
    Mat3 b = testutil::rand_mat(rng, -4, 4);
    CHECK(transform(q, mul(a, b)) == transform(transform(q, a), b));
  }

  SUBCASE("evaluation commutes with substitution") {
    Rng rng(31);
    Mat3 m = testutil::rand_mat(rng, -5, 5);
    TernaryForm qm = transform(q, m);
    for (int t = 0; t < 20; ++t) {
      Vec3 x(testutil::rand_int(rng, -9, 9), testutil::rand_int(rng, -9, 9),
             testutil::rand_int(rng, -9, 9));
      CHECK(evaluate(qm, x) == evaluate(q, mul(m, x)));
    }
  }
}

TEST_CASE("bounded isotropic search") {
  SUBCASE("split form yields an immediate zero") {
    auto z = find_isotropic(split_form());
    REQUIRE(z.has_value());
    CHECK(evaluate(split_form(), *z) == 0);
    CHECK(content(*z) == 1);
  }

  SUBCASE("sample form has a small zero") {
    TernaryForm q = testutil::sample_form_61();
    auto z = find_isotropic(q);
    REQUIRE(z.has_value());
    CHECK(evaluate(q, *z) == 0);
    CHECK(content(*z) == 1);
    CHECK(norm_sq(*z) <= Int(1997) * 1997);
  }

  SUBCASE("definite form is anisotropic") {
    CHECK_FALSE(find_isotropic(parse_form("1 0 0 1 0 1")).has_value());
  }

  SUBCASE("indefinite but anisotropic: x1^2 + x2^2 - 3 x3^2") {
    // no nontrivial zero: reduce mod 4
    CHECK_FALSE(find_isotropic(parse_form("1 0 0 1 0 -3")).has_value());
  }

  SUBCASE("scrambles of the split form always have zeros") {
    Rng rng(37);
    int tested = 0;
    while (tested < 30) {
      Mat3 a = testutil::rand_mat(rng, -3, 3);
      if (det3(a) == 0) continue;
      TernaryForm raw = transform(split_form(), a);
      raw = divide_form_exact(raw, content(raw));
      if (stats(raw).delta < 0)
        raw = TernaryForm{-raw.q11, -raw.q12, -raw.q13,
                          -raw.q22, -raw.q23, -raw.q33};
      ++tested;
      auto z = find_isotropic(raw);
      REQUIRE(z.has_value());
      CHECK(evaluate(raw, *z) == 0);
      CHECK(content(*z) == 1);
    }
  }

  SUBCASE("forms with a planted zero") {
    Rng rng(41);
    int tested = 0;
    while (tested < 30) {
      // plant the zero (1, z2, z3) by solving for q11
      Int z2 = testutil::rand_int(rng, -2, 2), z3 = testutil::rand_int(rng, -2, 2);
      TernaryForm q{0, testutil::rand_int(rng, -2, 2), testutil::rand_int(rng, -2, 2),
                    testutil::rand_int(rng, -2, 2), testutil::rand_int(rng, -2, 2),
                    testutil::rand_int(rng, -2, 2)};
      q.q11 = -(q.q12 * z2 + q.q13 * z3 + q.q22 * z2 * z2 + q.q23 * z2 * z3 +
                q.q33 * z3 * z3);
      Int g = content(q);
      if (g == 0) continue;
      q = divide_form_exact(q, g);
      if (stats(q).delta == 0) continue;
      ++tested;
      auto z = find_isotropic(q);
      REQUIRE(z.has_value());
      CHECK(evaluate(q, *z) == 0);
    }
  }
}
