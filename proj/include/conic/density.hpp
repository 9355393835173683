#pragma once
#include <vector>

#include "conic/decompose.hpp"
#include "conic/forms.hpp"

namespace conic {

// Weight on R^3 used for counting and for the real density. smooth_bump is
//
//   w0(x) = exp(-1 / (1 - |x|^2))   for |x|_2 < 1,   0 otherwise,
//
// so w0(0) = 1/e. The sharp kinds are the plain indicator of the sup or
// euclidean unit ball. scale stretches the support radius.
enum class WeightKind { smooth_bump, sharp_sup, sharp_l2 };

struct Weight {
  WeightKind kind = WeightKind::smooth_bump;
  double scale = 1.0;
};

double weight_value(const Weight& w, double y1, double y2, double y3);

// Triangle kernel of unit mass concentrating at t = 0 as T grows.
double kernel_kt(double t, double T);

enum class DensityMethod { pushforward_2d, kernel_3d };

struct DensityEstimate {
  double value = 0.0;
  DensityMethod method = DensityMethod::pushforward_2d;
  double est_error = 0.0;  // spread of the last refinement step
  bool converged = true;   // refinement hit its tolerance before the cap
  int levels = 0;          // dyadic levels (2d) or T stages (3d) consumed
};

// Real density of weighted points on the conic q = 0, computed as a plane
// integral through one class matrix:
//
//   sigma = sqrt(D_k / delta) * integral of w+(M(x1^2, x1x2, x2^2)) dx1 dx2
//
// with w+(y) = w(y) + w(-y). The value does not depend on which class is
// used. Sharp weights are fine here but converge slowly, so a result at the
// level cap comes back with converged = false and an honest est_error.
DensityEstimate sigma_infinity_2d(const TernaryForm& q, const ZeroClass& cls,
                                  const Weight& w);

// The same density straight from its definition: the volume integral of
// w(y) K_T(q(y)) at growing T, extrapolated in 1/sqrt(T). Smooth weights
// only. An empty schedule means T = 2^4, 2^5, ..., 2^12.
DensityEstimate sigma_infinity_3d(const TernaryForm& q, const Weight& w,
                                  std::vector<double> t_schedule = {});

// Size diagnostics for sigma. The gram matrix of an isotropic form has one
// positive eigenvalue lambda and two negative ones -mu, -nu (mu >= nu);
// their product is 2 delta, and sigma(q; w0) is pinched between explicit
// expressions in the eigenvalues, up to absolute constants.
struct EigenReport {
  double lambda = 0, mu = 0, nu = 0;
  double product_error = 0;   // relative defect of lambda*mu*nu vs 2 delta
  double sigma_w0 = 0;        // smooth-bump density, 2d route
  double lower = 0, upper = 0;  // c1/|q| and c2 rho^(1/4)/|q|
  bool in_window = false;       // lower <= sigma_w0 <= upper
  double casewise_ratio = 0;  // sigma_w0 against the eigenvalue expression
  bool casewise_ok = false;   // ratio within [c1, c2]
  double sigma_sharp = 0;     // sup-ball indicator density, coarse
  bool sharp_dominated = false;  // sigma_sharp <= 2 e^(4/3) sigma_w0
};

// with_sharp also evaluates the sup-indicator density for the domination
// check; that is the expensive part, so sweeps over many forms turn it off.
EigenReport eigen_diagnostics(const TernaryForm& q, double c1 = 1e-3,
                              double c2 = 1e3, bool with_sharp = true);

}  // namespace conic
