#pragma once
#include <random>

#include "conic/forms.hpp"
#include "conic/intmat.hpp"

namespace conic::testutil {

// Indefinite form used across the suite: determinant 977861 (prime), with
// small zeros (1,0,-1) and (39,0,61) among others.
inline TernaryForm sample_form_61() {
  return parse_form("-61 0 -22 -38 99 39");
}

// Two matrices sending the sample form onto 977861 * (x1x3 - x2^2).
inline Mat3 sample61_witness_1() {
  Mat3 m;
  m.a[0][0] = -1; m.a[0][1] = -45; m.a[0][2] = 3426;
  m.a[1][0] = 0;  m.a[1][1] = 100; m.a[1][2] = 3339;
  m.a[2][0] = 1;  m.a[2][1] = -54; m.a[2][2] = 3047;
  return m;
}

inline Mat3 sample61_witness_2() {
  Mat3 m;
  m.a[0][0] = 39; m.a[0][1] = -21;  m.a[0][2] = -98;
  m.a[1][0] = 0;  m.a[1][1] = -100; m.a[1][2] = -1;
  m.a[2][0] = 61; m.a[2][1] = 122;  m.a[2][2] = 99;
  return m;
}

// Deterministic RNG for property tests; seed fixed per test site.
using Rng = std::mt19937_64;

inline Int rand_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return Int(d(rng));
}

inline Mat3 rand_mat(Rng& rng, int lo, int hi) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.a[i][j] = rand_int(rng, lo, hi);
  return m;
}

// Random matrix with nonzero determinant.
inline Mat3 rand_nonsingular(Rng& rng, int lo = -6, int hi = 6) {
  for (;;) {
    Mat3 m = rand_mat(rng, lo, hi);
    if (det3(m) != 0) return m;
  }
}

// Random unimodular matrix: product of elementary shears and swaps.
inline Mat3 rand_unimodular(Rng& rng, int steps = 8, int shear_max = 3) {
  Mat3 m = Mat3::identity();
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> shear(-shear_max, shear_max);
  for (int s = 0; s < steps; ++s) {
    int i = pick(rng), j = pick(rng);
    if (i == j) {
      // swap two rows with a sign to keep det = +1
      int a = (i + 1) % 3, b = (i + 2) % 3;
      Mat3 e;
      e.a[i][i] = 1;
      e.a[a][b] = 1;
      e.a[b][a] = -1;
      m = mul(e, m);
    } else {
      Mat3 e = Mat3::identity();
      e.a[i][j] = shear(rng);
      m = mul(e, m);
    }
  }
  return m;
}

}  // namespace conic::testutil
