#include "conic/decompose.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "conic/autjreduce.hpp"
#include "conic/error.hpp"
#include "conic/numtheory.hpp"
#include "conic/padic.hpp"

namespace conic {

namespace {

// Integrality of m^-1 x through the adjugate. On success sigma = m^-1 x.
bool lattice_contains(const Mat3& adj, const Int& den, const Vec3& x,
                      Vec3* sigma) {
  Vec3 y = mul(adj, x);
  for (int i = 0; i < 3; ++i)
    if (y[i] % den != 0) return false;
  if (sigma) *sigma = Vec3(y[0] / den, y[1] / den, y[2] / den);
  return true;
}

// Recognizes sigma = (u^2, uv, v^2) for a coprime pair (u, v), u >= 0.
bool parameter_pair(const Vec3& sigma, Int* u_out, Int* v_out) {
  if (sigma[0] < 0 || sigma[2] < 0) return false;
  if (sigma[1] * sigma[1] != sigma[0] * sigma[2]) return false;
  Int u = isqrt_floor(sigma[0]);
  if (u * u != sigma[0]) return false;
  Int v = isqrt_floor(sigma[2]);
  if (v * v != sigma[2]) return false;
  if (u == 0 && v == 0) return false;
  if (u * v != sigma[1]) v = -v;
  if (u * v != sigma[1]) return false;
  if (gcd(u, v) != 1) return false;
  if (u_out) *u_out = u;
  if (v_out) *v_out = v;
  return true;
}

// A point of P^1(F_p) where some row quadratic r_i(u, v) = m_i1 u^2 +
// m_i2 uv + m_i3 v^2 is a unit mod p, or nullopt when no such point exists.
// A nonzero binary quadratic over F_p has at most two projective roots, so
// when p >= 5 it is enough to test five pairwise distinct points: if all
// fail, every row vanishes identically and the whole line is excluded.
std::optional<std::pair<Int, Int>> admissible_point(const Mat3& m,
                                                    const Int& p) {
  auto rows_vanish = [&](const Int& u, const Int& v) {
    for (int i = 0; i < 3; ++i) {
      Int r = m.a[i][0] * u * u + m.a[i][1] * u * v + m.a[i][2] * v * v;
      if (r % p != 0) return false;
    }
    return true;
  };
  std::vector<std::pair<Int, Int>> pts{{1, 0}};
  if (p < 5) {
    for (Int t = 0; t < p; ++t) pts.emplace_back(t, 1);
  } else {
    for (Int t = 0; t < 4; ++t) pts.emplace_back(t, 1);
  }
  for (const auto& pt : pts)
    if (!rows_vanish(pt.first, pt.second)) return pt;
  return std::nullopt;
}

bool is_perfect_square(const Int& n, Int* root) {
  if (n < 0) return false;
  Int r = isqrt_floor(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

// All primitive zeros with |x|_inf <= box, by solving the quadratic in x3
// column by column.
std::vector<Vec3> primitive_zeros_in_box(const TernaryForm& q,
                                         const Int& box) {
  std::vector<Vec3> out;
  if (box < 1) return out;
  if (q.q33 == 0) {
    out.emplace_back(0, 0, 1);
    out.emplace_back(0, 0, -1);
  }
  auto offer = [&](const Int& x1, const Int& x2, const Int& x3) {
    if (iabs(x3) > box) return;
    Vec3 x(x1, x2, x3);
    if (content(x) == 1) out.push_back(x);
  };
  for (Int x1 = -box; x1 <= box; ++x1) {
    for (Int x2 = -box; x2 <= box; ++x2) {
      if (x1 == 0 && x2 == 0) continue;
      const Int lin = q.q13 * x1 + q.q23 * x2;
      const Int con = q.q11 * x1 * x1 + q.q12 * x1 * x2 + q.q22 * x2 * x2;
      if (q.q33 == 0) {
        // lin and con cannot both vanish here, else q would be singular
        check_internal(lin != 0 || con != 0, "zero line in a nonsingular form");
        if (lin != 0 && con % lin == 0) offer(x1, x2, -con / lin);
        continue;
      }
      Int s;
      if (!is_perfect_square(lin * lin - 4 * q.q33 * con, &s)) continue;
      if ((s - lin) % (2 * q.q33) == 0) offer(x1, x2, (s - lin) / (2 * q.q33));
      if (s != 0 && (-s - lin) % (2 * q.q33) == 0)
        offer(x1, x2, (-s - lin) / (2 * q.q33));
    }
  }
  return out;
}

}  // namespace

NonemptyWitness check_nonempty(const TernaryForm& q, const ZeroClass& cls) {
  (void)q;
  const Mat3& m = cls.matrix;
  check_internal(cls.det_m == det3(m) && cls.det_m > 0, "class determinant");

  Int mod = 1, u0 = 0, v0 = 0;
  for (const auto& [p, e] : factor(cls.det_m)) {
    (void)e;
    auto pt = admissible_point(m, p);
    if (!pt) return {};
    u0 = crt_pair(u0, mod, pt->first, p);
    v0 = crt_pair(v0, mod, pt->second, p);
    mod *= p;
  }
  // Any pair congruent to (u0, v0) mod every prime of det gives a zero with
  // no forced prime factor; shift until the pair itself is coprime.
  for (Int b = 0; b < 32; ++b) {
    for (Int a = 0; a < 32; ++a) {
      Int u = u0 + a * mod, v = v0 + b * mod;
      if (u == 0 && v == 0) continue;
      if (gcd(u, v) != 1) continue;
      Vec3 x = mul(m, Vec3(u * u, u * v, v * v));
      check_internal(content(x) == 1, "admissible pair gave an imprimitive zero");
      return {true, u, v};
    }
  }
  check_internal(false, "coprime shift search exhausted");
  return {};
}

Decomposition decompose(const TernaryForm& q) {
  require(content(q) == 1, Errc::degenerate, "form must be primitive");
  const FormStats st = stats(q);
  require(st.delta != 0, Errc::degenerate, "form is singular");
  require(st.delta > 0, Errc::degenerate,
          "determinant is negative, negate the form first");

  std::optional<Vec3> z0 = find_isotropic(q);
  require(z0.has_value(), Errc::anisotropic, "form has no nontrivial zeros");

  const Factorization fac = factor(st.delta);

  // Peel delta one prime at a time. Each branch substitution r has
  // det r = p^mu and divides out p^((e + 2 mu) / 3), so the adjugate of r
  // carries a zero of the parent form to a zero of the reduced form.
  struct Node {
    Mat3 r;
    TernaryForm f;
    Vec3 z;
  };
  std::vector<Node> nodes{{Mat3::identity(), q, *z0}};
  for (const auto& [p, e] : fac) {
    std::vector<Node> next;
    for (const Node& nd : nodes) {
      for (const StripBranch& br : strip_prime(nd.f, p, e).branches)
        next.push_back({mul(nd.r, br.r), br.reduced,
                        primitive_part(mul(adjugate3(br.r), nd.z))});
    }
    nodes = std::move(next);
  }

  const Int tau = tau_from_factors(fac);
  check_internal(Int(nodes.size()) <= tau, "more branches than divisors");

  std::vector<ZeroClass> classes;
  for (const Node& nd : nodes) {
    check_internal(stats(nd.f).delta == 1, "leaf form must have unit delta");
    Mat3 m = mul(nd.r, split_unit_form(nd.f, nd.z));
    const TernaryForm t = transform(q, m);
    check_internal(t.q11 == 0 && t.q12 == 0 && t.q22 == -t.q13 &&
                       t.q23 == 0 && t.q33 == 0,
                   "class form is not a multiple of the split form");
    ZeroClass cls{m, t.q13, det3(m), {}, {}};
    const Int &dk = cls.multiplier, &det = cls.det_m;
    check_internal(dk > 0, "class multiplier must be positive");
    check_internal(det > 0 && st.delta % det == 0,
                   "determinant must divide delta");
    check_internal(st.delta * det * det == dk * dk * dk,
                   "delta det^2 = multiplier^3 identity");
    check_internal(dk % det == 0 && (det * det) % dk == 0 &&
                       st.delta % dk == 0,
                   "multiplier divisibility chain");
    for (const auto& [p, e] : fac)
      if (valuation(det, p) < e)
        check_internal(e >= 4, "delta/det prime needs a fourth power");

    if (!check_nonempty(q, cls).nonempty) continue;
    cls.matrix = polish(q, cls).matrix;
    MinimalZeros mz = minimal_zeros(q, cls);
    check_internal(!mz.capped, "minimal zero search hit its cap");
    cls.z1 = mz.z1;
    cls.z2 = mz.z2;
    classes.push_back(std::move(cls));
  }

  check_internal(!classes.empty(), "every class was pruned");
  bool cube_free = true, squarefree = true;
  for (const auto& [p, e] : fac) {
    (void)p;
    if (e > 1) squarefree = false;
    if (e > 2) cube_free = false;
  }
  if (cube_free)
    check_internal(classes.size() == nodes.size(),
                   "cube-free delta cannot have empty classes");
  if (squarefree)
    check_internal(Int(classes.size()) == tau,
                   "squarefree delta must give tau(delta) classes");

  std::sort(classes.begin(), classes.end(),
            [](const ZeroClass& x, const ZeroClass& y) {
              if (x.multiplier != y.multiplier)
                return x.multiplier < y.multiplier;
              const Mat3 hx = hnf_columns(x.matrix), hy = hnf_columns(y.matrix);
              for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                  if (hx.a[i][j] != hy.a[i][j]) return hx.a[i][j] < hy.a[i][j];
              return false;
            });
  for (std::size_t i = 1; i < classes.size(); ++i)
    check_internal(!(classes[i - 1].multiplier == classes[i].multiplier &&
                     hnf_columns(classes[i - 1].matrix) ==
                         hnf_columns(classes[i].matrix)),
                   "two classes share a lattice");

  return {q, st.delta, std::move(classes)};
}

int class_of(const Decomposition& dec, const Vec3& x) {
  require(content(x) == 1, Errc::degenerate, "vector must be primitive");
  require(evaluate(dec.form, x) == 0, Errc::degenerate,
          "vector is not a zero of the form");
  int found = -1;
  for (int k = 0; k < dec.k_count(); ++k) {
    const ZeroClass& cls = dec.classes[k];
    if (!lattice_contains(adjugate3(cls.matrix), cls.det_m, x, nullptr))
      continue;
    check_internal(found < 0, "zero lies in two class lattices");
    found = k;
  }
  check_internal(found >= 0, "zero lies in no class lattice");
  return found;
}

VerifyReport verify_decomposition(const Decomposition& dec, const Int& box) {
  VerifyReport rep;
  auto fail = [&](const std::string& msg) { rep.failures.push_back(msg); };
  const TernaryForm& q = dec.form;
  const Int delta = stats(q).delta;
  if (delta != dec.delta) fail("stored delta disagrees with the form");

  const Factorization fac = factor(delta);
  if (Int(dec.classes.size()) > tau_from_factors(fac))
    fail("more classes than divisors of delta");
  bool squarefree = true;
  for (const auto& [p, e] : fac) {
    (void)p;
    if (e > 1) squarefree = false;
  }
  if (squarefree && Int(dec.classes.size()) != tau_from_factors(fac))
    fail("squarefree delta must give tau(delta) classes");

  std::vector<Mat3> adjs;
  for (int k = 0; k < dec.k_count(); ++k) {
    const ZeroClass& cls = dec.classes[k];
    const std::string tag = "class " + std::to_string(k) + ": ";
    const Int &dk = cls.multiplier, &det = cls.det_m;
    if (det3(cls.matrix) != det || det <= 0)
      fail(tag + "bad determinant");
    if (transform(q, cls.matrix) !=
        TernaryForm{0, 0, dk, -dk, 0, 0})
      fail(tag + "matrix does not carry q onto multiplier * split form");
    if (dk <= 0 || delta % dk != 0) fail(tag + "multiplier must divide delta");
    if (delta % det != 0) fail(tag + "determinant must divide delta");
    if (delta * det * det != dk * dk * dk)
      fail(tag + "delta det^2 = multiplier^3 fails");
    if (dk % det != 0 || (det * det) % dk != 0)
      fail(tag + "multiplier divisibility chain fails");
    for (const auto& [p, e] : fac)
      if (valuation(det, p) < e && e < 4)
        fail(tag + "delta/det prime without a fourth power");
    if (evaluate(q, cls.z1) != 0 || evaluate(q, cls.z2) != 0)
      fail(tag + "stored zeros are not zeros");
    adjs.push_back(adjugate3(cls.matrix));
  }
  for (int i = 0; i < dec.k_count(); ++i)
    for (int j = i + 1; j < dec.k_count(); ++j)
      if (hnf_columns(dec.classes[i].matrix) ==
          hnf_columns(dec.classes[j].matrix))
        fail("classes " + std::to_string(i) + " and " + std::to_string(j) +
             " share a lattice");

  for (const Vec3& x : primitive_zeros_in_box(q, box)) {
    ++rep.zeros_checked;
    int owners = 0, pairs = 0;
    for (int k = 0; k < dec.k_count(); ++k) {
      Vec3 sigma;
      if (!lattice_contains(adjs[k], dec.classes[k].det_m, x, &sigma))
        continue;
      ++owners;
      for (const Vec3& s : {sigma, -sigma})
        if (parameter_pair(s, nullptr, nullptr)) pairs += 2;
    }
    const std::string where = "(" + x[0].str() + ", " + x[1].str() + ", " +
                              x[2].str() + ")";
    if (owners != 1)
      fail("zero " + where + " lies in " + std::to_string(owners) +
           " class lattices");
    if (pairs != 2)
      fail("zero " + where + " has " + std::to_string(pairs) +
           " parameter pairs");
  }
  return rep;
}

}  // namespace conic
