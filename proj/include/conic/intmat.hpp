#pragma once
#include <array>
#include <vector>

#include "conic/bigint.hpp"

namespace conic {

// ---------------------------------------------------------------------------
// small fixed-size integer vectors and matrices (arbitrary precision entries)
// ---------------------------------------------------------------------------

struct Vec2 {
  Int v[2]{};
  Int& operator[](int i) { return v[i]; }
  const Int& operator[](int i) const { return v[i]; }
  bool operator==(const Vec2& o) const { return v[0] == o.v[0] && v[1] == o.v[1]; }
};

struct Vec3 {
  Int v[3]{};
  Vec3() = default;
  Vec3(Int a, Int b, Int c) { v[0] = std::move(a); v[1] = std::move(b); v[2] = std::move(c); }
  Int& operator[](int i) { return v[i]; }
  const Int& operator[](int i) const { return v[i]; }
  bool operator==(const Vec3& o) const {
    return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2];
  }
  Vec3 operator-() const { return Vec3(-v[0], -v[1], -v[2]); }
};

struct Mat2 {
  Int a[2][2]{};
  static Mat2 identity() { Mat2 m; m.a[0][0] = 1; m.a[1][1] = 1; return m; }
};

struct Mat3 {
  Int a[3][3]{};
  static Mat3 identity() { Mat3 m; m.a[0][0] = 1; m.a[1][1] = 1; m.a[2][2] = 1; return m; }
  static Mat3 diagonal(const Int& d0, const Int& d1, const Int& d2) {
    Mat3 m; m.a[0][0] = d0; m.a[1][1] = d1; m.a[2][2] = d2; return m;
  }
  bool operator==(const Mat3& o) const {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (a[i][j] != o.a[i][j]) return false;
    return true;
  }
  Vec3 row(int i) const { return Vec3(a[i][0], a[i][1], a[i][2]); }
  Vec3 col(int j) const { return Vec3(a[0][j], a[1][j], a[2][j]); }
};

Int dot(const Vec3& x, const Vec3& y);
Int dot(const Vec2& x, const Vec2& y);
Int norm_sq(const Vec3& x);
Int norm_sq(const Vec2& x);
Int sup_norm(const Vec3& x);
Vec3 add(const Vec3& x, const Vec3& y);
Vec3 sub(const Vec3& x, const Vec3& y);
Vec3 scale(const Int& c, const Vec3& x);

Int det2(const Mat2& m);
Int det3(const Mat3& m);
Mat3 adjugate3(const Mat3& m);  // m * adjugate3(m) = det3(m) * I
Mat3 mul(const Mat3& x, const Mat3& y);
Vec3 mul(const Mat3& m, const Vec3& x);
Mat2 mul(const Mat2& x, const Mat2& y);
Mat3 transpose(const Mat3& m);
Mat3 neg(const Mat3& m);
Mat3 mat_mod_sym(const Mat3& m, const Int& r);  // entrywise symmetric residue

Int content(const Vec3& x);            // gcd of entries, 0 for the zero vector
Int content(const Mat3& m);
Vec3 primitive_part(const Vec3& x);    // x / content(x); rejects the zero vector

// Inverse of a matrix with det = +-1.
Mat3 inverse_unimodular(const Mat3& m);

// ---------------------------------------------------------------------------
// Smith normal form: M = U * D * V with U, V unimodular (det +-1) and
// D = diag(d1, d2, d3), d1 | d2 | d3, all di >= 0.
// ---------------------------------------------------------------------------

struct Snf3 {
  Mat3 U, D, V;
};

Snf3 smith_normal_form(const Mat3& m);

// Lift of M to SL3(Z) along the congruence M'' = M (mod r).
// Requires det(M) = 1 (mod r).
Mat3 sl3_lift(const Mat3& m, const Int& r);

// Canonical basis of the column lattice of a nonsingular M: the unique
// lower-triangular H = M * W (W unimodular) with positive diagonal and each
// off-diagonal entry reduced modulo the diagonal entry of its row.
Mat3 hnf_columns(const Mat3& m);

// Matrix with det = +1 whose first column is z; requires content(z) = 1.
Mat3 complete_primitive_to_unimodular(const Vec3& z);

// ---------------------------------------------------------------------------
// rank-2 lattices in Z^2 (used by the counting sieve)
// ---------------------------------------------------------------------------

struct Lattice2 {
  Vec2 b1, b2;   // basis columns
  Int det() const;  // positive determinant
};

// Gauss reduction: same lattice, |b1| <= |b2|, |b1|^2 |b2|^2 <= (4/3) det^2.
Lattice2 reduce_lattice_basis(Lattice2 L);

// Canonical (column HNF) basis of the lattice generated by `gens`.
// Requires full rank.
Mat2 hnf2_from_generators(const std::vector<Vec2>& gens);

}  // namespace conic
