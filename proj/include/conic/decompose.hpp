#pragma once
#include <string>
#include <vector>

#include "conic/forms.hpp"
#include "conic/intmat.hpp"

namespace conic {

// One class of primitive zeros of q: the zeros x with M^-1 x integral.
// Every such x is M (u^2, uv, v^2) for a coprime pair (u, v), each pair
// appearing twice (as (u, v) and (-u, -v)), and
//
//   q(M x) = multiplier * (x1 x3 - x2^2)
//
// identically. det_m = det(matrix) > 0 divides multiplier, multiplier
// divides det_m^2, and delta(q) * det_m^2 = multiplier^3.
struct ZeroClass {
  Mat3 matrix;
  Int multiplier;
  Int det_m;
  Vec3 z1;   // zero of smallest sup norm in the class, one of the pair +-z1
  Vec3 z2;   // next smallest, distinct from +-z1
};

struct Decomposition {
  TernaryForm form;
  Int delta = 0;
  std::vector<ZeroClass> classes;
  int k_count() const { return static_cast<int>(classes.size()); }
};

// Splits the primitive zeros of q into finitely many classes. The class
// count is at most tau(delta), with equality when delta is squarefree.
// Class matrices are size-reduced and the list is sorted by (multiplier,
// column HNF), so the output is deterministic.
//
// Errors: degenerate for imprimitive or nonpositive-delta input,
// anisotropic when q has no nontrivial zero, factoring_cap from factor().
Decomposition decompose(const TernaryForm& q);

// Index of the unique class whose lattice contains x. x must be a
// primitive zero of dec.form (degenerate otherwise).
int class_of(const Decomposition& dec, const Vec3& x);

struct NonemptyWitness {
  bool nonempty = false;
  Int u, v;   // coprime pair with x = M(u^2, uv, v^2) primitive
};

// Decides whether a class lattice contains any primitive zero at all.
// A class is empty exactly when, for some prime p | det_m, every point
// (u : v) of P^1(F_p) forces p | M(u^2, uv, v^2).
NonemptyWitness check_nonempty(const TernaryForm& q, const ZeroClass& cls);

struct VerifyReport {
  std::vector<std::string> failures;
  long long zeros_checked = 0;
  bool ok() const { return failures.empty(); }
};

// Exhaustive audit of a decomposition: re-checks the arithmetic invariants
// of every class, then enumerates all primitive zeros with |x|_inf <= box
// and confirms each lies in exactly one class lattice and is hit by exactly
// two parameter pairs (u, v) across the whole decomposition.
VerifyReport verify_decomposition(const Decomposition& dec, const Int& box);

}  // namespace conic
