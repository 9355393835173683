#include "conic/counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "conic/error.hpp"
#include "conic/numtheory.hpp"
#include "conic/parallel.hpp"

namespace conic {

namespace {

Vec3 monomials(const Int& u, const Int& v) { return Vec3(u * u, u * v, v * v); }

// Largest t >= 0 with t^4 * den <= num (num >= 0, den > 0).
Int fourth_root_cap(const Int& num, const Int& den) {
  if (num <= 0) return 0;
  Int t = isqrt_floor(isqrt_floor(num / den));
  auto fourth = [](const Int& x) {
    Int s = x * x;
    return Int(s * s);
  };
  while (fourth(t + 1) * den <= num) ++t;
  while (t > 0 && fourth(t) * den > num) --t;
  return t;
}

// Integer thresholds realizing "height(x) <= b" for integer vectors, plus an
// enclosing Euclidean bound used to size the parameter box.
struct HeightGate {
  Height h = Height::sup_norm;
  Int sup_cap;
  Int ns_cap;
  Int ball_sq;
};

HeightGate make_gate(double b, Height h) {
  require(b >= 0 && b <= 1e8, Errc::malformed_input,
          "height bound out of range");
  HeightGate g;
  g.h = h;
  auto ll = [](double x) { return Int(static_cast<long long>(x)); };
  if (h == Height::sup_norm) {
    g.sup_cap = ll(std::floor(b + 1e-9));
    g.ball_sq = 3 * g.sup_cap * g.sup_cap;
  } else if (h == Height::l2_norm) {
    g.ns_cap = ll(std::floor(b * b + 1e-9));
    g.ball_sq = g.ns_cap;
  } else {
    // support of w0(x/b) is the open ball, so the comparison is strict
    g.ns_cap = ll(std::ceil(b * b - 1e-9)) - 1;
    if (g.ns_cap < 0) g.ns_cap = 0;
    g.ball_sq = g.ns_cap;
  }
  return g;
}

bool passes(const HeightGate& g, const Vec3& x) {
  if (g.h == Height::sup_norm) return sup_norm(x) <= g.sup_cap;
  return norm_sq(x) <= g.ns_cap;
}

struct ParamBox {
  long long u_cap = 0;
  long long v_cap = 0;
};

// |u|^2 <= |r1| |x| and |v|^2 <= |r3| |x| for the first and last rows of the
// inverse of M, so a Euclidean bound on x gives exact fourth-root caps.
ParamBox param_box(const Mat3& adj, const Int& det_m, const Int& ball_sq) {
  Int det_sq = det_m * det_m;
  Int uc = fourth_root_cap(ball_sq * norm_sq(adj.row(0)), det_sq);
  Int vc = fourth_root_cap(ball_sq * norm_sq(adj.row(2)), det_sq);
  check_internal(fits_int64(uc) && fits_int64(vc), "parameter box too large");
  return {to_int64(uc), to_int64(vc)};
}

int mobius_of(const Int& n) {
  Factorization f = factor(n);
  for (const auto& pe : f)
    if (pe.second > 1) return 0;
  return f.size() % 2 == 0 ? 1 : -1;
}

// --- prime classification helpers ---------------------------------------

using ProjPoint = std::pair<Int, Int>;  // (u0 : v0), normalized

Lattice2 lattice_through(const ProjPoint& root, const Int& p) {
  std::vector<Vec2> gens(3);
  gens[0][0] = mod_pos(root.first, p);
  gens[0][1] = mod_pos(root.second, p);
  gens[1][0] = p;
  gens[2][1] = p;
  Mat2 h = hnf2_from_generators(gens);
  Lattice2 out;
  out.b1[0] = h.a[0][0];
  out.b1[1] = h.a[1][0];
  out.b2[0] = h.a[0][1];
  out.b2[1] = h.a[1][1];
  check_internal(out.det() == p, "root lattice has wrong determinant");
  return out;
}

// All points of P^1(F_p) where the three row quadratics vanish together,
// found by direct scan. Exhaustive, so it certifies the classification.
std::vector<ProjPoint> roots_by_scan(const Mat3& m, std::int64_t p) {
  std::int64_t r[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = to_int64(mod_pos(m.a[i][j], p));
  auto vanishes = [&](std::int64_t u, std::int64_t v) {
    std::int64_t uu = (u * u) % p, uv = (u * v) % p, vv = (v * v) % p;
    for (int i = 0; i < 3; ++i)
      if ((r[i][0] * uu + r[i][1] * uv + r[i][2] * vv) % p != 0) return false;
    return true;
  };
  std::vector<ProjPoint> roots;
  for (std::int64_t t = 0; t < p; ++t)
    if (vanishes(1, t)) roots.emplace_back(1, t);
  if (vanishes(0, 1)) roots.emplace_back(0, 1);
  check_internal(roots.size() <= 2, "matrix vanishes modulo p");
  return roots;
}

// Nonzero echelon rows of M mod p (a basis of its row space).
std::vector<std::array<Int, 3>> echelon_rows_mod(const Mat3& m, const Int& p) {
  std::array<std::array<Int, 3>, 3> rows;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows[i][j] = mod_pos(m.a[i][j], p);
  int top = 0;
  for (int col = 0; col < 3 && top < 3; ++col) {
    int pivot = -1;
    for (int i = top; i < 3; ++i)
      if (rows[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[top], rows[pivot]);
    Int inv = inv_mod(rows[top][col], p);
    for (int j = 0; j < 3; ++j) rows[top][j] = (rows[top][j] * inv) % p;
    for (int i = 0; i < 3; ++i) {
      if (i == top || rows[i][col] == 0) continue;
      Int c = rows[i][col];
      for (int j = 0; j < 3; ++j)
        rows[i][j] = mod_pos(rows[i][j] - c * rows[top][j], p);
    }
    ++top;
  }
  std::vector<std::array<Int, 3>> out;
  for (int i = 0; i < top; ++i) out.push_back(rows[i]);
  return out;
}

// Roots of A u^2 + B uv + C v^2 over P^1(F_p), p odd, (A,B,C) != 0 mod p.
std::vector<ProjPoint> roots_of_binary(const Int& a, const Int& b,
                                       const Int& c, const Int& p) {
  std::vector<ProjPoint> roots;
  if (a == 0) {
    roots.emplace_back(1, 0);
    if (b != 0) {
      Int t = mod_pos(-c * inv_mod(b, p), p);
      roots.emplace_back(t, 1);
    }
    return roots;
  }
  Int disc = mod_pos(b * b - 4 * a * c, p);
  if (disc == 0) {
    roots.emplace_back(mod_pos(-b * inv_mod(2 * a, p), p), 1);
  } else if (legendre_symbol(disc, p) == 1) {
    Int s = sqrt_mod_prime(disc, p);
    Int inv2a = inv_mod(2 * a, p);
    roots.emplace_back(mod_pos((-b + s) * inv2a, p), 1);
    roots.emplace_back(mod_pos((-b - s) * inv2a, p), 1);
  }
  return roots;
}

// Common roots via rank reduction; avoids any scan, so it works for primes
// beyond the scan limit. Requires p odd.
std::vector<ProjPoint> roots_by_algebra(const Mat3& m, const Int& p) {
  std::vector<std::array<Int, 3>> rows = echelon_rows_mod(m, p);
  check_internal(!rows.empty(), "matrix vanishes modulo p");
  if (rows.size() == 3) return {};
  if (rows.size() == 1)
    return roots_of_binary(rows[0][0], rows[0][1], rows[0][2], p);

  std::array<Int, 3> f = rows[0], g = rows[1];
  if (f[0] == 0 && g[0] == 0) {
    // both quadratics are divisible by v; the linear cofactors are
    // independent, so the only common root is (1 : 0)
    return {{Int(1), Int(0)}};
  }
  if (f[0] == 0) std::swap(f, g);
  // eliminate the u^2 term: h = f[0]*g - g[0]*f is v * (B'u + C'v)
  Int bp = mod_pos(f[0] * g[1] - g[0] * f[1], p);
  Int cp = mod_pos(f[0] * g[2] - g[0] * f[2], p);
  check_internal(bp != 0 || cp != 0, "dependent rows after elimination");
  if (bp == 0) return {};  // common root would need v = 0, but f(1,0) != 0
  Int t = mod_pos(-cp * inv_mod(bp, p), p);
  if (mod_pos(f[0] * t * t + f[1] * t + f[2], p) != 0) return {};
  return {{t, Int(1)}};
}

}  // namespace

PrimeClass classify_prime(const ZeroClass& cls, const Int& p,
                          std::int64_t scan_limit) {
  require(p >= 2 && is_prime(p), Errc::malformed_input,
          "classification needs a prime");
  PrimeClass out;
  out.p = p;
  // invertible matrices force p | (u,v), with no lattice condition
  if (cls.det_m % p != 0) return out;

  std::vector<ProjPoint> roots;
  if (p == 2 || p <= scan_limit)
    roots = roots_by_scan(cls.matrix, to_int64(p));
  else
    roots = roots_by_algebra(cls.matrix, p);

  for (const ProjPoint& root : roots) {
    Vec3 image = mul(cls.matrix, monomials(root.first, root.second));
    for (int i = 0; i < 3; ++i)
      check_internal(image[i] % p == 0, "claimed root is not a root");
    out.lattices.push_back(lattice_through(root, p));
  }
  if (out.lattices.size() == 2) {
    const Lattice2 &x = out.lattices[0], &y = out.lattices[1];
    if (std::tie(y.b1[0], y.b1[1], y.b2[0], y.b2[1]) <
        std::tie(x.b1[0], x.b1[1], x.b2[0], x.b2[1]))
      std::swap(out.lattices[0], out.lattices[1]);
  }
  return out;
}

namespace {

bool lattice_contains2(const Lattice2& lat, const Int& u1, const Int& u2) {
  // adjugate of the basis matrix maps members to multiples of the determinant
  const Int &a = lat.b1[0], &b = lat.b1[1], &c = lat.b2[0], &d = lat.b2[1];
  Int det = lat.det();
  return (d * u1 - c * u2) % det == 0 && (a * u2 - b * u1) % det == 0;
}

// One linear condition mod p cutting out the determinant-p lattice.
void line_form(const Lattice2& lat, const Int& p, Int* alpha, Int* beta) {
  Int a1 = mod_pos(lat.b2[1], p), b1 = mod_pos(-lat.b2[0], p);
  if (a1 != 0 || b1 != 0) {
    *alpha = a1;
    *beta = b1;
    return;
  }
  *alpha = mod_pos(-lat.b1[1], p);
  *beta = mod_pos(lat.b1[0], p);
  check_internal(*alpha != 0 || *beta != 0, "degenerate lattice basis");
}

Lattice2 canonical_lattice(const std::vector<Vec2>& gens) {
  Mat2 h = hnf2_from_generators(gens);
  Lattice2 out;
  out.b1[0] = h.a[0][0];
  out.b1[1] = h.a[1][0];
  out.b2[0] = h.a[0][1];
  out.b2[1] = h.a[1][1];
  return out;
}

// L cap {alpha u1 + beta u2 = 0 mod p} for p coprime to det(L).
Lattice2 intersect_line(const Lattice2& l, const Int& alpha, const Int& beta,
                        const Int& p) {
  Int f1 = mod_pos(alpha * l.b1[0] + beta * l.b1[1], p);
  Int f2 = mod_pos(alpha * l.b2[0] + beta * l.b2[1], p);
  check_internal(f1 != 0 || f2 != 0, "lattice lies inside the line");
  Vec2 c;
  if (f1 == 0) {
    c = l.b1;
  } else if (f2 == 0) {
    c = l.b2;
  } else {
    Int t = mod_pos(-f2 * inv_mod(f1, p), p);
    c[0] = t * l.b1[0] + l.b2[0];
    c[1] = t * l.b1[1] + l.b2[1];
  }
  Vec2 pb1, pb2;
  pb1[0] = p * l.b1[0];
  pb1[1] = p * l.b1[1];
  pb2[0] = p * l.b2[0];
  pb2[1] = p * l.b2[1];
  Lattice2 out = canonical_lattice({c, pb1, pb2});
  check_internal(out.det() == p * l.det(), "intersection determinant");
  return out;
}

Lattice2 scale_lattice(const Lattice2& l, const Int& p) {
  Vec2 pb1, pb2;
  pb1[0] = p * l.b1[0];
  pb1[1] = p * l.b1[1];
  pb2[0] = p * l.b2[0];
  pb2[1] = p * l.b2[1];
  return canonical_lattice({pb1, pb2});
}

}  // namespace

SieveData sieve_setup(const Decomposition& dec, int k) {
  require(k >= 0 && k < dec.k_count(), Errc::malformed_input,
          "class index out of range");
  const ZeroClass& cls = dec.classes[k];
  SieveData sd;
  SieveTerm whole;
  whole.lattice.b1[0] = 1;
  whole.lattice.b2[1] = 1;
  whole.det = 1;
  whole.sign = 1;
  sd.terms.push_back(whole);

  double kappa = 6.0 / (std::numbers::pi * std::numbers::pi);
  for (const auto& [p, e] : factor(dec.delta)) {
    PrimeClass pc = classify_prime(cls, p);
    if (pc.lattices.empty()) continue;
    if (e == 1)
      check_internal(pc.lattices.size() == 1,
                     "prime dividing the determinant exactly once must give "
                     "one lattice");
    double pd = to_double(p);
    std::vector<SieveTerm> grown;
    grown.reserve(sd.terms.size() * (pc.lattices.size() == 1 ? 2 : 4));
    if (pc.lattices.size() == 1) {
      sd.delta1 *= p;
      kappa *= 1.0 / (1.0 + 1.0 / pd);
      Int alpha, beta;
      line_form(pc.lattices[0], p, &alpha, &beta);
      for (const SieveTerm& t : sd.terms) {
        grown.push_back(t);
        SieveTerm cut;
        cut.lattice = intersect_line(t.lattice, alpha, beta, p);
        cut.det = t.det * p;
        cut.sign = -t.sign;
        grown.push_back(cut);
      }
    } else {
      sd.delta2 *= p;
      kappa *= (1.0 - 1.0 / pd) / (1.0 + 1.0 / pd);
      Int a1, b1, a2, b2;
      line_form(pc.lattices[0], p, &a1, &b1);
      line_form(pc.lattices[1], p, &a2, &b2);
      for (const SieveTerm& t : sd.terms) {
        grown.push_back(t);
        SieveTerm cut1;
        cut1.lattice = intersect_line(t.lattice, a1, b1, p);
        cut1.det = t.det * p;
        cut1.sign = -t.sign;
        grown.push_back(cut1);
        SieveTerm cut2;
        cut2.lattice = intersect_line(t.lattice, a2, b2, p);
        cut2.det = t.det * p;
        cut2.sign = -t.sign;
        grown.push_back(cut2);
        // the two lattices meet in p Z^2, so their joint condition scales
        // the whole term by p and keeps its sign
        SieveTerm both;
        both.lattice = scale_lattice(t.lattice, p);
        both.det = t.det * p * p;
        both.sign = t.sign;
        grown.push_back(both);
      }
    }
    sd.terms = std::move(grown);
  }
  sd.kappa = kappa;
  check_internal(kappa > 0 &&
                     kappa <= 6.0 / (std::numbers::pi * std::numbers::pi) + 1e-15,
                 "parameter density out of range");
  return sd;
}

long long count_class(const TernaryForm& q, const ZeroClass& cls, double b,
                      Height height) {
  if (b < 1) return 0;
  HeightGate gate = make_gate(b, height);
  const Mat3& m = cls.matrix;
  ParamBox box = param_box(adjugate3(m), cls.det_m, gate.ball_sq);
  long long vn = box.v_cap;

  return parallel_map_reduce(
      box.u_cap + 1, 0LL,
      [&](long long lo, long long hi) {
        long long tally = 0;
        for (long long ui = lo; ui < hi; ++ui) {
          Int u(ui);
          for (long long vi = ui == 0 ? 1 : -vn; vi <= vn; ++vi) {
            Int v(vi);
            if (gcd(u, v) != 1) continue;
            Vec3 x = mul(m, monomials(u, v));
            if (content(x) != 1) continue;
            if (!passes(gate, x)) continue;
            check_internal(evaluate(q, x) == 0,
                           "parametrized point is not a zero");
            tally += 2;
          }
        }
        return tally;
      },
      [](long long a, long long c) { return a + c; });
}

double weighted_count_class(const TernaryForm& q, const ZeroClass& cls,
                            double b) {
  if (b <= 1) return 0.0;
  HeightGate gate = make_gate(b, Height::smooth_w0);
  const Mat3& m = cls.matrix;
  ParamBox box = param_box(adjugate3(m), cls.det_m, gate.ball_sq);
  long long vn = box.v_cap;
  double bb = b * b;

  return parallel_map_reduce(
      box.u_cap + 1, 0.0,
      [&](long long lo, long long hi) {
        double sum = 0, comp = 0;
        for (long long ui = lo; ui < hi; ++ui) {
          Int u(ui);
          for (long long vi = ui == 0 ? 1 : -vn; vi <= vn; ++vi) {
            Int v(vi);
            if (gcd(u, v) != 1) continue;
            Vec3 x = mul(m, monomials(u, v));
            if (content(x) != 1) continue;
            Int ns = norm_sq(x);
            if (ns > gate.ns_cap) continue;
            double r2 = to_double(ns) / bb;
            if (r2 >= 1.0) continue;
            check_internal(evaluate(q, x) == 0,
                           "parametrized point is not a zero");
            double value = 2.0 * std::exp(-1.0 / (1.0 - r2));
            double y = value - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
          }
        }
        return sum;
      },
      [](double a, double c) { return a + c; });
}

CountReport count_total(const Decomposition& dec, double b, Height height,
                        double sigma_inf) {
  CountReport rep;
  rep.b = b;
  rep.height = height;
  for (const ZeroClass& cls : dec.classes) {
    long long c = count_class(dec.form, cls, b, height);
    rep.per_class.push_back(c);
    rep.raw_count += c;
    if (height == Height::smooth_w0)
      rep.weighted += weighted_count_class(dec.form, cls, b);
  }
  rep.point_count = static_cast<double>(rep.raw_count) / 2.0;
  if (sigma_inf > 0) {
    rep.predicted = predict_total(dec, sigma_inf).coefficient * b / 2.0;
    if (rep.predicted > 0) rep.ratio = rep.point_count / rep.predicted;
  }
  return rep;
}

std::vector<Vec3> brute_force_zeros(const TernaryForm& q, const Int& box,
                                    const Int& cap) {
  require(box >= 0, Errc::malformed_input, "negative box");
  require(box <= cap, Errc::malformed_input, "oracle cap exceeded");
  require(content(q) == 1, Errc::degenerate, "form must be primitive");
  require(stats(q).delta != 0, Errc::degenerate, "form must be nonsingular");

  std::vector<Vec3> out;
  if (q.q33 == 0 && box >= 1) {
    out.push_back(Vec3(0, 0, 1));
    out.push_back(Vec3(0, 0, -1));
  }
  for (Int x1 = -box; x1 <= box; ++x1) {
    for (Int x2 = -box; x2 <= box; ++x2) {
      if (x1 == 0 && x2 == 0) continue;
      Int lin = q.q13 * x1 + q.q23 * x2;
      Int con = q.q11 * x1 * x1 + q.q12 * x1 * x2 + q.q22 * x2 * x2;
      auto offer = [&](const Int& x3) {
        if (iabs(x3) > box) return;
        Vec3 x(x1, x2, x3);
        if (content(x) != 1) return;
        out.push_back(x);
      };
      if (q.q33 == 0) {
        check_internal(lin != 0 || con != 0, "form vanishes along a line");
        if (lin != 0 && con % lin == 0) offer(-con / lin);
        continue;
      }
      Int disc = lin * lin - 4 * q.q33 * con;
      Int s;
      if (!is_square(disc, &s)) continue;
      Int den = 2 * q.q33;
      if ((s - lin) % den == 0) offer((s - lin) / den);
      if (s != 0 && (-s - lin) % den == 0) offer((-s - lin) / den);
    }
  }
  std::sort(out.begin(), out.end(), [](const Vec3& a, const Vec3& b2) {
    return std::tie(a[0], a[1], a[2]) < std::tie(b2[0], b2[1], b2[2]);
  });
  return out;
}

SieveCheck sieve_identity_check(const Decomposition& dec, int k, double b) {
  require(k >= 0 && k < dec.k_count(), Errc::malformed_input,
          "class index out of range");
  const ZeroClass& cls = dec.classes[k];
  SieveCheck out;
  out.direct = count_class(dec.form, cls, b, Height::l2_norm);

  SieveData sd = sieve_setup(dec, k);
  HeightGate gate = make_gate(b, Height::l2_norm);
  const Int& bsq = gate.ns_cap;
  Mat3 adj = adjugate3(cls.matrix);
  Int coprime_to = sd.delta1 * sd.delta2;

  long long total = 0;
  for (Int d = 1; d * d * d * d <= bsq; ++d) {
    if (gcd(d, coprime_to) != 1) continue;
    int mu = mobius_of(d);
    if (mu == 0) continue;
    Int d4 = d * d * d * d;
    // |M(u^2,uv,v^2)| <= b / d^2, evaluated exactly as ns * d^4 <= bsq
    ParamBox box = param_box(adj, cls.det_m, bsq / d4);
    for (const SieveTerm& term : sd.terms) {
      long long members = 0;
      for (long long ui = 0; ui <= box.u_cap; ++ui) {
        Int u(ui);
        for (long long vi = ui == 0 ? 1 : -box.v_cap; vi <= box.v_cap; ++vi) {
          Int v(vi);
          if (!lattice_contains2(term.lattice, u, v)) continue;
          if (norm_sq(mul(cls.matrix, monomials(u, v))) * d4 > bsq) continue;
          members += 2;  // (u,v) and (-u,-v) give the same image
        }
      }
      total += term.sign * mu * members;
    }
  }
  out.expansion = total;
  return out;
}

double predict_class(const Decomposition& dec, int k, double sigma_inf) {
  require(k >= 0 && k < dec.k_count(), Errc::malformed_input,
          "class index out of range");
  SieveData sd = sieve_setup(dec, k);
  double ratio = to_double(dec.delta) / to_double(dec.classes[k].multiplier);
  return 0.5 * std::sqrt(ratio) * sigma_inf * sd.kappa;
}

TotalPrediction predict_total(const Decomposition& dec, double sigma_inf) {
  TotalPrediction out;
  for (int k = 0; k < dec.k_count(); ++k) {
    SieveData sd = sieve_setup(dec, k);
    double ratio = to_double(dec.delta) / to_double(dec.classes[k].multiplier);
    out.singular_series += sd.kappa * std::sqrt(ratio);
  }
  out.coefficient = 0.5 * sigma_inf * out.singular_series;
  return out;
}

double psi_diagnostic(const TernaryForm& q, double sigma_w0, double sigma_w,
                      double b) {
  require(sigma_w > 0 && b > 1, Errc::malformed_input,
          "diagnostic needs sigma_w > 0 and b > 1");
  FormStats st = stats(q);
  require(st.delta != 0, Errc::degenerate, "form must be nonsingular");
  int omega = omega_from_factors(factor(iabs(st.delta)));
  return std::pow(4.0, omega) * st.aspect_ratio * (sigma_w0 / sigma_w) *
         std::log(b);
}

}  // namespace conic
