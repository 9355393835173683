#pragma once
#include <vector>

#include "conic/forms.hpp"

namespace conic {

// Local shape of a form at a prime p with p^e exactly dividing delta.
//   degenerate_line:  q(Mx) = kappa x3^2               (mod p)
//   split_hyperbolic: q(Mx) = x1x2 + kappa p^e x3^2    (mod p^{e+1})
//   nonsplit_plane:   q(Mx) = q1(x1,x2) + kappa p^e x3^2 (mod p^{e+1}),
//                     q1 irreducible mod p
enum class FormCaseTag { degenerate_line, split_hyperbolic, nonsplit_plane };

struct NormalFormCase {
  FormCaseTag tag;
  Mat3 transform;  // det = 1; the defining congruence is verified exactly
  Int kappa;       // unit mod p
};

// pre: p prime, e >= 1, p^e exactly divides delta(q), p does not divide
// content(q). The returned matrix always has det = 1 over the integers.
NormalFormCase mod_p_normal_form(const TernaryForm& q, const Int& p, int e);

// One branch of the prime-stripping tree: det(r) = p^mu and
// reduced = q o r / p^{(e + 2 mu)/3} is integral with delta(q) / p^e.
struct StripBranch {
  Mat3 r;
  int mu;
  TernaryForm reduced;
};

struct StripResult {
  std::vector<StripBranch> branches;
};

// Removes the full power p^e from delta(q). Every primitive zero x of q has
// exactly one branch with r^{-1} x integral. Branch count is at most e + 1,
// and exactly 2 when e = 1. Throws anisotropic when the local structure
// admits no p-adic zeros (nonsplit plane with e < 2).
StripResult strip_prime(const TernaryForm& q, const Int& p, int e);

// For delta(q) = 1 and a primitive zero z: a det-1 matrix M with
// q(Mx) = x1x3 - x2^2 exactly.
Mat3 split_unit_form(const TernaryForm& q, const Vec3& z);

}  // namespace conic
