#pragma once
#include <optional>
#include <string>

#include "conic/intmat.hpp"

namespace conic {

// Ternary quadratic form in asymmetric shape:
//   q(x) = q11 x1^2 + q12 x1x2 + q13 x1x3 + q22 x2^2 + q23 x2x3 + q33 x3^2
struct TernaryForm {
  Int q11, q12, q13, q22, q23, q33;
  bool operator==(const TernaryForm&) const = default;
};

// x1x3 - x2^2, the split form every class matrix maps onto
TernaryForm split_form();

struct FormStats {
  Mat3 gram;            // symmetric matrix Q with even diagonal, q(x) = x'Qx/2
  Int delta;            // det(Q) / 2
  Int norm_sq;          // 4q11^2 + 2q12^2 + 2q13^2 + 4q22^2 + 2q23^2 + 4q33^2
  double aspect_ratio;  // norm^3 / delta, at least 2 for normalized forms
};

// Six whitespace-separated integers q11 q12 q13 q22 q23 q33. The result is
// normalized: imprimitive input is an error unless divide_content is set, and
// the sign is flipped if needed so that delta > 0. Singular forms are errors.
TernaryForm parse_form(const std::string& text, bool divide_content = false);

std::string form_to_text(const TernaryForm& q);

FormStats stats(const TernaryForm& q);

Int evaluate(const TernaryForm& q, const Vec3& x);

// Coefficients of q(Mx); no normalization, the result may be imprimitive.
// delta scales by det(M)^2.
TernaryForm transform(const TernaryForm& q, const Mat3& m);

Int content(const TernaryForm& q);

// Divides every coefficient by d; d must divide the content.
TernaryForm divide_form_exact(const TernaryForm& q, const Int& d);

// Bounded search for a primitive zero. Any isotropic normalized form has a
// zero of euclidean length at most 10 * ||q||, so an exhausted search at
// bound_multiplier >= 1 proves the form anisotropic (nullopt).
std::optional<Vec3> find_isotropic(const TernaryForm& q,
                                   double bound_multiplier = 1.0);

}  // namespace conic
