#pragma once
#include "conic/decompose.hpp"
#include "conic/forms.hpp"
#include "conic/intmat.hpp"

namespace conic {

// The automorphisms of J = x1 x3 - x2^2 used here are symmetric squares of
// GL2(Z) elements: g = [[a,b],[c,d]] acts on binary forms u^2, uv, v^2 and
// the induced 3x3 matrix satisfies J(Sx) = det(g)^2 J(x), so det(g) = +-1
// gives an automorphism. det(sym_square(g)) = det(g)^3.
struct AutJElement {
  Mat3 matrix;
  Mat2 source;
};

AutJElement sym_square(const Mat2& g);

struct RowReduction {
  Mat3 u;    // automorphism of J with det +1
  Mat3 ua;   // u * a
};

// Size reduction on the left. Input must satisfy J(a x) = c_scale * q(x)
// identically with c_scale > 0. The rows r1, r2, r3 of the result satisfy
//
//   |r1| |r3| <= 9 c_scale |q|   and   |r2|^2 <= 10 c_scale |q|
//
// with |q|^2 = stats(q).norm_sq. Both bounds are checked exactly in
// squared-integer arithmetic before returning.
RowReduction reduce_rows(const Mat3& a, const Int& c_scale,
                         const TernaryForm& q);

struct ReducedClassMatrix {
  Mat3 matrix;   // same column lattice and multiplier as the input class
  Mat3 adj;      // adjugate of matrix; adj / den is the inverse
  Int den;       // det(matrix), unchanged by the reduction
};

// Replaces a class matrix M by N = M U^-1 for an automorphism U of J,
// chosen so that the rows of N^-1 satisfy the reduce_rows bounds and the
// columns c1, c2, c3 of N satisfy
//
//   |c1| <= |c3|,  |c1| |c3| <= 90 (det/D)^2 |q|^2,  |c2| <= 9 (det/D) |q|.
//
// The column lattice, determinant and multiplier are all preserved.
ReducedClassMatrix polish(const TernaryForm& q, const ZeroClass& cls);

struct MinimalZeros {
  Vec3 z1, z2;
  bool capped = false;   // search hit the cap before both zeros appeared
};

// The two primitive zeros of smallest sup norm in a class (one per
// antipodal pair, ties broken by euclidean length and coordinates), found
// by growing a search ball until both minima are certified. Expects a
// polished class matrix; the lower bound
// |z1| |z2| >= multiplier / |q| and the column comparisons
// |c1| <= 90 rho |z1|, |c3| <= 90 rho |z2| are checked exactly.
MinimalZeros minimal_zeros(const TernaryForm& q, const ZeroClass& cls,
                           const Int& cap = Int(1) << 40);

struct AldReport {
  double lambda = 0.0;   // component of row a along row c
  double mu = 0.0;       // component of row b along row c
  bool e_short = false;        // |e|^2 <= |q|^2 / 2
  bool lambda_mu_sq = false;   // |lambda - mu^2| <= |q| / (2 |c|^2)
  bool d_aligned = false;      // |d - 2 mu e| <= |q| / |c|
  bool lambda_unit = false;    // |lambda| <= 1
  bool all() const {
    return e_short && lambda_mu_sq && d_aligned && lambda_unit;
  }
};

// Floating-point diagnostic for the orthogonal-decomposition inequalities
// behind reduce_rows. Rows a, b, c of the input, with a = lambda c + d and
// b = mu c + e, d and e orthogonal to c. Requires J(a x) = q(x) exactly and
// |a| <= |c| (malformed_input otherwise). Tolerance 1e-9 relative.
AldReport lemma_ald_check(const Mat3& a, const TernaryForm& q);

}  // namespace conic
