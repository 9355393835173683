#include "doctest.h"

#include <functional>
#include <vector>

#include "conic/autjreduce.hpp"
#include "conic/decompose.hpp"
#include "conic/error.hpp"
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

Mat2 mat2(Int a, Int b, Int c, Int d) {
  Mat2 g;
  g.a[0][0] = std::move(a);
  g.a[0][1] = std::move(b);
  g.a[1][0] = std::move(c);
  g.a[1][1] = std::move(d);
  return g;
}

Mat2 rand_glu2(Rng& rng, int steps) {
  Mat2 g = Mat2::identity();
  for (int s = 0; s < steps; ++s) {
    Int m = testutil::rand_int(rng, -4, 4);
    Mat2 e = (s % 2 == 0) ? mat2(1, m, 0, 1) : mat2(1, 0, m, 1);
    g = mul(g, e);
  }
  if (testutil::rand_int(rng, 0, 1) == 1) g = mul(g, mat2(0, 1, 1, 0));
  return g;
}

// A random word in the generators of Aut(J), including the reflection that
// is not a symmetric square.
Mat3 rand_autj(Rng& rng, int steps) {
  Mat3 u = Mat3::identity();
  for (int s = 0; s < steps; ++s) {
    u = mul(u, sym_square(rand_glu2(rng, 2)).matrix);
    if (testutil::rand_int(rng, 0, 2) == 0)
      u = mul(u, Mat3::diagonal(1, -1, 1));
  }
  return u;
}

Int row_product(const Mat3& m) {
  return norm_sq(m.row(0)) * norm_sq(m.row(2));
}

}  // namespace

TEST_CASE("symmetric squares of unimodular 2x2 matrices") {
  SUBCASE("identity and the two matrices used in the reduction") {
    CHECK(sym_square(Mat2::identity()).matrix == Mat3::identity());

    Mat3 u1 = sym_square(mat2(1, 0, -1, 1)).matrix;
    Mat3 u1_expect;
    u1_expect.a[0][0] = 1;
    u1_expect.a[1][0] = -1;
    u1_expect.a[1][1] = 1;
    u1_expect.a[2][0] = 1;
    u1_expect.a[2][1] = -2;
    u1_expect.a[2][2] = 1;
    CHECK(u1 == u1_expect);

    Mat3 u2 = sym_square(mat2(0, 1, 1, 0)).matrix;
    Mat3 u2_expect;
    u2_expect.a[0][2] = 1;
    u2_expect.a[1][1] = 1;
    u2_expect.a[2][0] = 1;
    CHECK(u2 == u2_expect);
    CHECK(det3(u2) == -1);
  }

  SUBCASE("preserves the split form and cubes the determinant") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
      Mat2 g = rand_glu2(rng, 6);
      AutJElement e = sym_square(g);
      CHECK(transform(split_form(), e.matrix) == split_form());
      CHECK(det3(e.matrix) == det2(g));  // det(g)^3 = det(g) for det +-1
      CHECK(e.source.a[0][0] == g.a[0][0]);
    }
  }

  SUBCASE("rejects non-unimodular input") {
    CHECK(code_of([] { sym_square(mat2(2, 0, 0, 1)); }) ==
          Errc::malformed_input);
    CHECK(code_of([] { sym_square(mat2(1, 1, 1, 1)); }) ==
          Errc::malformed_input);
  }
}

TEST_CASE("row reduction restores the descent bounds") {
  const TernaryForm j = split_form();
  const Int ns_j = stats(j).norm_sq;

  SUBCASE("already reduced input is a fixed point up to normalization") {
    RowReduction rr = reduce_rows(Mat3::identity(), 1, j);
    CHECK(det3(rr.u) == 1);
    CHECK(rr.ua == mul(rr.u, Mat3::identity()));
    CHECK(row_product(rr.ua) <= 81 * ns_j);
  }

  SUBCASE("long random automorphism words are undone") {
    Rng rng(555);
    for (int trial = 0; trial < 60; ++trial) {
      Mat3 a = rand_autj(rng, 12);
      RowReduction rr = reduce_rows(a, 1, j);
      CHECK(det3(rr.u) == 1);
      CHECK(transform(split_form(), rr.ua) == j);
      CHECK(row_product(rr.ua) <= 81 * ns_j);
      Int mid = norm_sq(rr.ua.row(1));
      CHECK(mid * mid <= 100 * ns_j);
    }
  }

  SUBCASE("adjugate of a known class matrix for the sample form") {
    TernaryForm q = testutil::sample_form_61();
    Int p0 = stats(q).delta;
    Mat3 a = adjugate3(testutil::sample61_witness_1());
    // J(Ax) = (det^2 / D) q(x) with det^2 = D^2 = p0^2 here
    RowReduction rr = reduce_rows(a, p0, q);
    Int ns_q = stats(q).norm_sq;
    CHECK(row_product(rr.ua) <= 81 * p0 * p0 * ns_q);
    Int mid = norm_sq(rr.ua.row(1));
    CHECK(mid * mid <= 100 * p0 * p0 * ns_q);
  }

  SUBCASE("scale and fibre preconditions") {
    TernaryForm q = testutil::sample_form_61();
    CHECK(code_of([&] { reduce_rows(Mat3::identity(), 1, q); }) ==
          Errc::malformed_input);
    CHECK(code_of([&] { reduce_rows(Mat3::identity(), 0, split_form()); }) ==
          Errc::malformed_input);
  }
}

TEST_CASE("polish keeps the lattice while shrinking the matrix") {
  SUBCASE("the split form's single class stays small") {
    Decomposition dec = decompose(split_form());
    REQUIRE(dec.k_count() == 1);
    ReducedClassMatrix rm = polish(split_form(), dec.classes[0]);
    CHECK(rm.den == 1);
    CHECK(norm_sq(rm.matrix.col(0)) <= 540);   // 90 |q|^2 with |q|^2 = 6
    CHECK(norm_sq(rm.matrix.col(2)) <= 540);
    CHECK(hnf_columns(rm.matrix) == Mat3::identity());
  }

  SUBCASE("random automorphism scrambles of polished classes") {
    Rng rng(777);
    std::vector<TernaryForm> pool{
        split_form(),
        testutil::sample_form_61(),
        parse_form("0 1 0 0 0 -16"),
        parse_form("1 1 0 -1 0 16"),
        parse_form("0 1 0 0 0 -27"),
    };
    int instances = 0;
    for (const TernaryForm& q : pool) {
      Decomposition dec = decompose(q);
      for (const ZeroClass& cls : dec.classes) {
        for (int rep = 0; rep < 8; ++rep) {
          Mat2 g = rand_glu2(rng, 8);
          if (det2(g) < 0) g = mul(g, mat2(0, 1, 1, 0));
          ZeroClass scrambled = cls;
          scrambled.matrix = mul(cls.matrix, sym_square(g).matrix);
          REQUIRE(det3(scrambled.matrix) == cls.det_m);
          ReducedClassMatrix rm = polish(q, scrambled);
          CHECK(hnf_columns(rm.matrix) == hnf_columns(cls.matrix));
          CHECK(det3(rm.matrix) == cls.det_m);
          CHECK(transform(q, rm.matrix) ==
                transform(q, cls.matrix));
          CHECK(mul(rm.matrix, rm.adj) ==
                Mat3::diagonal(rm.den, rm.den, rm.den));
          ++instances;
        }
      }
    }
    CHECK(instances >= 100);
  }
}

TEST_CASE("minimal zeros of the sample form classes") {
  TernaryForm q = testutil::sample_form_61();
  Decomposition dec = decompose(q);
  REQUIRE(dec.k_count() == 2);
  int k1 = class_of(dec, Vec3(1, 0, -1));
  int k2 = class_of(dec, Vec3(39, 0, 61));
  REQUIRE(k1 != k2);

  SUBCASE("the class of (1,0,-1) has a huge gap to its second zero") {
    MinimalZeros mz = minimal_zeros(q, dec.classes[k1]);
    CHECK(!mz.capped);
    CHECK(mz.z1 == Vec3(1, 0, -1));
    CHECK(mz.z2 == Vec3(3426, 3339, 3047));
    CHECK(norm_sq(mz.z2) == 32170606);
    // expected length of the second zero, 5671.913...
    CHECK(norm_sq(testutil::sample61_witness_1().col(2)) == 32170606);
    // every zero of this class other than +-z1 has length at least 3462.805
    CHECK(norm_sq(mz.z2) >= Int(3462) * Int(3462));
  }

  SUBCASE("the other class has all its small zeros close together") {
    MinimalZeros mz = minimal_zeros(q, dec.classes[k2]);
    CHECK(!mz.capped);
    CHECK(mz.z1 == Vec3(39, 0, 61));
    CHECK(mz.z2 == Vec3(38, -99, -38));
    CHECK(evaluate(q, mz.z2) == 0);
  }

  SUBCASE("a tiny cap reports truncation instead of failing") {
    MinimalZeros mz = minimal_zeros(q, dec.classes[k1], 4);
    CHECK(mz.capped);
  }

  SUBCASE("the split form's class has the two unit zeros") {
    Decomposition dj = decompose(split_form());
    MinimalZeros mz = minimal_zeros(split_form(), dj.classes[0]);
    CHECK(mz.z1 == Vec3(0, 0, 1));
    CHECK(mz.z2 == Vec3(1, 0, 0));
  }
}

TEST_CASE("orthogonal decomposition diagnostics") {
  SUBCASE("identity against the split form") {
    AldReport rep = lemma_ald_check(Mat3::identity(), split_form());
    CHECK(rep.all());
    CHECK(rep.lambda == doctest::Approx(0.0));
    CHECK(rep.mu == doctest::Approx(0.0));
  }

  SUBCASE("reduced random automorphism words pass all clauses") {
    Rng rng(31337);
    for (int trial = 0; trial < 40; ++trial) {
      Mat3 a = rand_autj(rng, 10);
      RowReduction rr = reduce_rows(a, 1, split_form());
      Mat3 m = rr.ua;
      if (norm_sq(m.row(0)) > norm_sq(m.row(2)))
        m = mul(sym_square(mat2(0, 1, 1, 0)).matrix, m);
      AldReport rep = lemma_ald_check(m, split_form());
      CHECK(rep.all());
    }
  }

  SUBCASE("preconditions are enforced") {
    // rows out of order: the first row is the long one
    Mat3 a = sym_square(mat2(1, 1, 0, 1)).matrix;
    CHECK(code_of([&] { lemma_ald_check(a, split_form()); }) ==
          Errc::malformed_input);
    CHECK(code_of([&] {
      lemma_ald_check(Mat3::identity(), testutil::sample_form_61());
    }) == Errc::malformed_input);
  }
}
