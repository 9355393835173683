#pragma once
#include <vector>

#include "conic/decompose.hpp"
#include "conic/forms.hpp"
#include "conic/intmat.hpp"

namespace conic {

// Height conventions for N(B). SupNorm is the max-coordinate box, L2Norm the
// Euclidean ball, SmoothW0 the support of the smooth bump w0(x/B) (an open
// Euclidean ball; use weighted_count_class for the weighted tally itself).
enum class Height { sup_norm, l2_norm, smooth_w0 };

// Behaviour of a prime on the parameter plane of one class. For all but
// finitely many primes, p | M(u^2,uv,v^2) forces p | (u,v); the exceptions
// are described by one or two index-p sublattices of Z^2.
struct PrimeClass {
  Int p;
  // Empty: p | M(u^2,uv,v^2) iff p | u and p | v.
  // Otherwise p | M(u^2,uv,v^2) iff (u,v) lies in one of these lattices,
  // each of determinant p.
  std::vector<Lattice2> lattices;
};

// classify_prime decides the PrimeClass tag by finding the projective roots
// of the three row quadratics of M mod p. Primes up to scan_limit are handled
// by scanning all of P^1(F_p) directly; larger (odd) primes go through rank
// reduction plus quadratic root-finding mod p, which needs no scan.
PrimeClass classify_prime(const ZeroClass& cls, const Int& p,
                          std::int64_t scan_limit = 2'000'000);

// One term of the inclusion-exclusion over sublattices: the parameter points
// of the class whose image has gcd coprime to delta1*delta2 are counted by
// sum of sign * #(lattice points), sign being the Liouville function of det.
struct SieveTerm {
  Lattice2 lattice;
  Int det;
  int sign;
};

struct SieveData {
  Int delta1{1};  // product of the primes contributing one lattice
  Int delta2{1};  // product of the primes contributing two lattices
  std::vector<SieveTerm> terms;
  // (6/pi^2) * prod_{p | delta1} 1/(1+1/p) * prod_{p | delta2} (1-1/p)/(1+1/p);
  // the density of parameter points with primitive image, lies in (0, 6/pi^2].
  double kappa = 0.0;
};

// Builds the sieve data of class k from the prime classification at every
// prime dividing the determinant of the decomposed form.
SieveData sieve_setup(const Decomposition& dec, int k);

// Number of primitive zero vectors of the class with height at most B, both
// signs counted (always even). Enumerates one parameter representative per
// antipodal pair inside an exact enclosing box and filters by gcd and height.
long long count_class(const TernaryForm& q, const ZeroClass& cls, double b,
                      Height height);

// Sum of w0(x/b) over the primitive zero vectors of the class, both signs,
// where w0 is the radial bump exp(-1/(1-|x|^2)) on the open unit ball.
// Compensated summation; absolute error below 1e-12 at desk scale.
double weighted_count_class(const TernaryForm& q, const ZeroClass& cls,
                            double b);

struct CountReport {
  double b = 0.0;
  Height height = Height::sup_norm;
  long long raw_count = 0;             // vectors, both signs
  double point_count = 0.0;            // raw_count / 2
  std::vector<long long> per_class;
  double weighted = 0.0;               // only filled for Height::smooth_w0
  double predicted = 0.0;              // predicted point count, 0 if no sigma
  double ratio = 0.0;                  // point_count / predicted, 0 if no sigma
};

// Per-class counts plus totals; pass the archimedean density sigma_inf
// matching the chosen height to fill the prediction columns.
CountReport count_total(const Decomposition& dec, double b, Height height,
                        double sigma_inf = 0.0);

// Exhaustive list of primitive zero vectors with sup norm <= box, both signs,
// ordered lexicographically. Quadratic in box; refuses box > cap.
std::vector<Vec3> brute_force_zeros(const TernaryForm& q, const Int& box,
                                    const Int& cap = Int(5000));

// Cross-check of the primitivity sieve: the direct count of the class inside
// the Euclidean ball of radius b must equal the Liouville/Moebius expansion
// over sublattices evaluated with the sharp ball weight.
struct SieveCheck {
  long long direct = 0;
  long long expansion = 0;
  bool ok() const { return direct == expansion; }
};
SieveCheck sieve_identity_check(const Decomposition& dec, int k, double b);

// Leading coefficient of the vector count of class k per unit B:
// sqrt(delta / D_k) / 2 * sigma_inf * kappa_k.
double predict_class(const Decomposition& dec, int k, double sigma_inf);

struct TotalPrediction {
  double singular_series = 0.0;  // sum over classes of kappa_k sqrt(delta/D_k)
  double coefficient = 0.0;      // vector count per unit B: sigma/2 * series
};
TotalPrediction predict_total(const Decomposition& dec, double sigma_inf);

// Relative-error diagnostic of the asymptotic: 4^omega(delta) * rho *
// sigma_w0/sigma_w * log B. Reported, never asserted.
double psi_diagnostic(const TernaryForm& q, double sigma_w0, double sigma_w,
                      double b);

}  // namespace conic
