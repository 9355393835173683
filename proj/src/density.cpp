#include "conic/density.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "conic/error.hpp"
#include "conic/parallel.hpp"

namespace conic {
namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// Summation order fixed by the data layout, not by thread scheduling.
double pairwise_sum(const double* a, size_t n) {
  if (n <= 8) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

double pairwise_sum(const std::vector<double>& a) {
  return pairwise_sum(a.data(), a.size());
}

struct Mat3d {
  double a[3][3];
};

Mat3d to_double_mat(const Mat3& m) {
  Mat3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = to_double(m.a[i][j]);
  return r;
}

// 16-point Gauss-Legendre rule on [-1, 1], positive abscissae half.
constexpr double kGaussX[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGaussW[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

template <class F>
double gauss16(double a, double b, const F& f) {
  double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 8; ++i) {
    double d = rad * kGaussX[i];
    s += kGaussW[i] * (f(mid - d) + f(mid + d));
  }
  return s * rad;
}

// Midpoint sum of f over an n-by-n grid on the rectangle, rows in parallel,
// each row and the row list folded pairwise.
template <class F>
double grid_integral(double x_lo, double x_hi, double y_lo, double y_hi,
                     int n, const F& f) {
  const double hx = (x_hi - x_lo) / n;
  const double hy = (y_hi - y_lo) / n;
  std::vector<double> rows = parallel_map_reduce(
      n, std::vector<double>{},
      [&](long long lo, long long hi) {
        std::vector<double> part;
        part.reserve(static_cast<size_t>(hi - lo));
        std::vector<double> cells(n);
        for (long long i = lo; i < hi; ++i) {
          double x = x_lo + (i + 0.5) * hx;
          for (int j = 0; j < n; ++j)
            cells[j] = f(x, y_lo + (j + 0.5) * hy);
          part.push_back(pairwise_sum(cells));
        }
        return part;
      },
      [](std::vector<double> acc, std::vector<double> part) {
        acc.insert(acc.end(), part.begin(), part.end());
        return acc;
      });
  return pairwise_sum(rows) * hx * hy;
}

// Dyadic refinement of grid_integral: doubles the grid until two successive
// levels agree to rel_tol, or the level cap is hit.
// Dyadic refinement of grid_integral: doubles the grid until two successive
// levels agree to rel_tol, or the level cap is hit. A discontinuous
// integrand can alias to the exact same sum on several dyadic grids in a
// row while still being far from its limit, so when trust_plateau is off
// the early exit is disabled and the error estimate is the last delta that
// was actually nonzero.
template <class F>
DensityEstimate refine(double x_lo, double x_hi, double y_lo, double y_hi,
                       int level_lo, int level_hi, double rel_tol,
                       bool trust_plateau, const F& f) {
  DensityEstimate est;
  double prev = 0, prev_delta = 0;
  for (int level = level_lo; level <= level_hi; ++level) {
    double cur = grid_integral(x_lo, x_hi, y_lo, y_hi, 1 << level, f);
    est.levels = level;
    est.value = cur;
    if (level > level_lo) {
      double delta = std::abs(cur - prev);
      if (delta > 0 || est.est_error == 0.0)
        est.est_error = std::max(delta, prev_delta);
      if (trust_plateau && cur != 0.0 &&
          level >= std::max(level_lo + 2, 8) &&
          std::max(delta, prev_delta) <=
              rel_tol * std::max(std::abs(cur), 1e-300)) {
        est.converged = true;
        return est;
      }
      prev_delta = delta;
    }
    prev = cur;
  }
  est.converged = false;
  return est;
}

}  // namespace

double weight_value(const Weight& w, double y1, double y2, double y3) {
  require(w.scale > 0, Errc::malformed_input, "weight scale must be positive");
  y1 /= w.scale;
  y2 /= w.scale;
  y3 /= w.scale;
  switch (w.kind) {
    case WeightKind::smooth_bump:
      return bump(y1 * y1 + y2 * y2 + y3 * y3);
    case WeightKind::sharp_sup:
      return std::max({std::abs(y1), std::abs(y2), std::abs(y3)}) <= 1.0
                 ? 1.0
                 : 0.0;
    case WeightKind::sharp_l2:
      return y1 * y1 + y2 * y2 + y3 * y3 <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double kernel_kt(double t, double T) {
  require(T > 0, Errc::malformed_input, "kernel parameter must be positive");
  return T * std::max(1.0 - T * std::abs(t), 0.0);
}

DensityEstimate sigma_infinity_2d(const TernaryForm& q, const ZeroClass& cls,
                                  const Weight& w) {
  FormStats st = stats(q);
  require(st.delta > 0, Errc::degenerate, "form must have positive delta");

  // Support box: if w+(M(x1^2, x1x2, x2^2)) != 0 then the image lies in a
  // euclidean ball of known radius, and |x1|^2, |x2|^2 are at most that
  // radius times the corresponding row norm of M^-1.
  double radius = w.scale * (w.kind == WeightKind::sharp_sup
                                 ? std::sqrt(3.0)
                                 : 1.0);
  Mat3 adj = adjugate3(cls.matrix);
  double det = std::abs(to_double(det3(cls.matrix)));
  double x1_cap =
      std::sqrt(radius * std::sqrt(to_double(norm_sq(adj.row(0)))) / det);
  double x2_cap =
      std::sqrt(radius * std::sqrt(to_double(norm_sq(adj.row(2)))) / det);

  Mat3d m = to_double_mat(cls.matrix);
  auto f = [&](double x1, double x2) {
    double s = x1 * x1, t = x1 * x2, u = x2 * x2;
    double y1 = m.a[0][0] * s + m.a[0][1] * t + m.a[0][2] * u;
    double y2 = m.a[1][0] * s + m.a[1][1] * t + m.a[1][2] * u;
    double y3 = m.a[2][0] * s + m.a[2][1] * t + m.a[2][2] * u;
    return weight_value(w, y1, y2, y3) + weight_value(w, -y1, -y2, -y3);
  };

  DensityEstimate est =
      refine(-x1_cap, x1_cap, -x2_cap, x2_cap, 4, 12, 1e-6,
             w.kind == WeightKind::smooth_bump, f);
  double scale_out =
      std::sqrt(to_double(cls.multiplier) / to_double(st.delta));
  est.value *= scale_out;
  est.est_error *= scale_out;
  est.method = DensityMethod::pushforward_2d;
  return est;
}

namespace {

// One vertical line of the kernel integral: fixed (y2, y3), integrate
// w(y) K_T(q(y)) over the y1 chord of the support ball. The quadratic
// t(y1) = q(y) crosses the kernel window |t| < 1/T on up to two intervals;
// the integrand is analytic between the breakpoints collected here.
struct LineIntegrand {
  const TernaryForm* q;
  const Weight* w;
  double q11, q12, q13, q22, q23, q33;

  explicit LineIntegrand(const TernaryForm& form, const Weight& weight)
      : q(&form),
        w(&weight),
        q11(to_double(form.q11)),
        q12(to_double(form.q12)),
        q13(to_double(form.q13)),
        q22(to_double(form.q22)),
        q23(to_double(form.q23)),
        q33(to_double(form.q33)) {}

  double line(double y2, double y3, double T) const {
    double chord_sq = w->scale * w->scale - y2 * y2 - y3 * y3;
    if (chord_sq <= 0) return 0.0;
    double c = std::sqrt(chord_sq);

    double a = q11;
    double b = q12 * y2 + q13 * y3;
    double cc = q22 * y2 * y2 + q23 * y2 * y3 + q33 * y3 * y3;

    double pts[10];
    int n_pts = 0;
    pts[n_pts++] = -c;
    pts[n_pts++] = c;
    auto add = [&](double y) {
      if (y > -c && y < c) pts[n_pts++] = y;
    };
    for (double v : {-1.0 / T, 0.0, 1.0 / T}) {
      if (a == 0.0) {
        if (std::abs(b) > 1e-300) add((v - cc) / b);
        continue;
      }
      double disc = b * b - 4.0 * a * (cc - v);
      if (disc < 0) continue;
      double sq = std::sqrt(disc);
      double qq = -0.5 * (b + std::copysign(sq, b == 0 ? 1.0 : b));
      add(qq / a);
      if (qq != 0.0) add((cc - v) / qq);
    }
    if (a != 0.0) add(-b / (2.0 * a));
    std::sort(pts, pts + n_pts);

    double t_cut = 1.0 / T;
    double sum = 0;
    for (int i = 0; i + 1 < n_pts; ++i) {
      double lo = pts[i], hi = pts[i + 1];
      if (hi - lo < 1e-15) continue;
      double mid = 0.5 * (lo + hi);
      double t_mid = (a * mid + b) * mid + cc;
      if (std::abs(t_mid) >= t_cut) continue;
      sum += gauss16(lo, hi, [&](double y1) {
        double t = (a * y1 + b) * y1 + cc;
        return weight_value(*w, y1, y2, y3) * kernel_kt(t, T);
      });
    }
    return sum;
  }
};

}  // namespace

DensityEstimate sigma_infinity_3d(const TernaryForm& q, const Weight& w,
                                  std::vector<double> t_schedule) {
  require(w.kind == WeightKind::smooth_bump, Errc::malformed_input,
          "kernel route needs a smooth weight");
  if (t_schedule.empty())
    for (int e = 4; e <= 12; ++e) t_schedule.push_back(double(1 << e));
  require(t_schedule.size() >= 2, Errc::malformed_input,
          "need at least two kernel stages to extrapolate");
  for (size_t i = 1; i < t_schedule.size(); ++i)
    require(t_schedule[i] > t_schedule[i - 1] && t_schedule[i - 1] > 0,
            Errc::malformed_input, "kernel stages must increase");

  LineIntegrand li(q, w);
  double s = w.scale;
  std::vector<double> stage(t_schedule.size());
  std::vector<double> grid_err(t_schedule.size());
  for (size_t i = 0; i < t_schedule.size(); ++i) {
    double T = t_schedule[i];
    DensityEstimate grid = refine(
        -s, s, -s, s, 5, 11, 1e-7, true,
        [&](double y2, double y3) { return li.line(y2, y3, T); });
    stage[i] = grid.value;
    grid_err[i] = grid.est_error;
  }

  // One Richardson step against the O(T^(-1/2)) tail per adjacent pair.
  // Large T concentrates the integrand on ever thinner ridges, and past
  // some stage the plane grid stops resolving them, so the best pair is
  // usually not the last one: each candidate is scored by its propagated
  // grid error plus the extrapolation delta, and the smallest score wins.
  size_t n = stage.size();
  std::vector<double> extrap(n - 1), prop(n - 1);
  for (size_t i = 1; i < n; ++i) {
    double r = std::sqrt(t_schedule[i - 1] / t_schedule[i]);
    extrap[i - 1] = (stage[i] - r * stage[i - 1]) / (1.0 - r);
    prop[i - 1] = (grid_err[i] + r * grid_err[i - 1]) / (1.0 - r);
  }

  DensityEstimate est;
  est.method = DensityMethod::kernel_3d;
  size_t best = 0;
  double best_score = 0;
  for (size_t i = 0; i < extrap.size(); ++i) {
    double tail = i > 0 ? std::abs(extrap[i] - extrap[i - 1])
                        : std::abs(extrap[i] - stage[i + 1]);
    double score = prop[i] + tail;
    if (i == 0 || score < best_score) {
      best = i;
      best_score = score;
    }
  }
  est.value = extrap[best];
  est.levels = static_cast<int>(best) + 2;  // stages consumed by the pick
  est.est_error = best_score;
  est.converged = true;
  return est;
}

namespace {

// Eigenvalues of a symmetric 3x3 by cyclic Jacobi rotations.
void jacobi_eigenvalues(double a[3][3], double eig[3]) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-300) break;
    double scale = std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]);
    if (off <= 1e-16 * std::max(scale, 1e-300)) break;
    for (int p = 0; p < 2; ++p) {
      for (int r = p + 1; r < 3; ++r) {
        if (a[p][r] == 0.0) continue;
        double theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
        double t = std::copysign(
            1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0)), theta);
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        for (int k = 0; k < 3; ++k) {
          double akp = a[k][p], akr = a[k][r];
          a[k][p] = cth * akp - sth * akr;
          a[k][r] = sth * akp + cth * akr;
        }
        for (int k = 0; k < 3; ++k) {
          double apk = a[p][k], ark = a[r][k];
          a[p][k] = cth * apk - sth * ark;
          a[r][k] = sth * apk + cth * ark;
        }
      }
    }
  }
  eig[0] = a[0][0];
  eig[1] = a[1][1];
  eig[2] = a[2][2];
}

}  // namespace

EigenReport eigen_diagnostics(const TernaryForm& q, double c1, double c2,
                              bool with_sharp) {
  FormStats st = stats(q);
  require(st.delta > 0, Errc::degenerate, "form must have positive delta");

  double g[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = to_double(st.gram.a[i][j]);
  double eig[3];
  jacobi_eigenvalues(g, eig);
  std::sort(eig, eig + 3);

  require(eig[2] > 0 && eig[1] < 0, Errc::anisotropic,
          "form is definite, no real zeros");
  EigenReport rep;
  rep.lambda = eig[2];
  rep.mu = -eig[0];
  rep.nu = -eig[1];

  double delta = to_double(st.delta);
  rep.product_error =
      std::abs(rep.lambda * rep.mu * rep.nu - 2.0 * delta) / (2.0 * delta);

  Decomposition dec = decompose(q);
  rep.sigma_w0 =
      sigma_infinity_2d(q, dec.classes[0], {WeightKind::smooth_bump, 1.0})
          .value;
  if (with_sharp)
    rep.sigma_sharp =
        sigma_infinity_2d(q, dec.classes[0], {WeightKind::sharp_sup, 1.0})
            .value;

  double qnorm = std::sqrt(to_double(st.norm_sq));
  rep.lower = c1 / qnorm;
  rep.upper = c2 * std::pow(st.aspect_ratio, 0.25) / qnorm;
  rep.in_window = rep.lower <= rep.sigma_w0 && rep.sigma_w0 <= rep.upper;

  double small = std::min({rep.lambda, rep.mu, rep.nu});
  double base = std::sqrt(small / delta);
  if (rep.lambda >= rep.mu)
    base *= std::log(2.0 * rep.mu / rep.nu);
  else if (rep.lambda >= rep.nu)
    base *= std::log(2.0 * rep.lambda / rep.nu);
  rep.casewise_ratio = rep.sigma_w0 / base;
  rep.casewise_ok = rep.casewise_ratio >= c1 && rep.casewise_ratio <= c2;

  rep.sharp_dominated =
      with_sharp &&
      rep.sigma_sharp <= 2.0 * std::exp(4.0 / 3.0) * rep.sigma_w0 * (1 + 1e-9);
  return rep;
}

}  // namespace conic
