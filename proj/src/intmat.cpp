#include "conic/intmat.hpp"

#include <algorithm>

namespace conic {

// ---------------------------------------------------------------------------
// basic operations
// ---------------------------------------------------------------------------

Int dot(const Vec3& x, const Vec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

Int dot(const Vec2& x, const Vec2& y) { return x[0] * y[0] + x[1] * y[1]; }

Int norm_sq(const Vec3& x) { return dot(x, x); }
Int norm_sq(const Vec2& x) { return dot(x, x); }

Int sup_norm(const Vec3& x) {
  return std::max({iabs(x[0]), iabs(x[1]), iabs(x[2])});
}

Vec3 add(const Vec3& x, const Vec3& y) { return Vec3(x[0] + y[0], x[1] + y[1], x[2] + y[2]); }
Vec3 sub(const Vec3& x, const Vec3& y) { return Vec3(x[0] - y[0], x[1] - y[1], x[2] - y[2]); }
Vec3 scale(const Int& c, const Vec3& x) { return Vec3(c * x[0], c * x[1], c * x[2]); }

Int det2(const Mat2& m) { return m.a[0][0] * m.a[1][1] - m.a[0][1] * m.a[1][0]; }

Int det3(const Mat3& m) {
  return m.a[0][0] * (m.a[1][1] * m.a[2][2] - m.a[1][2] * m.a[2][1]) -
         m.a[0][1] * (m.a[1][0] * m.a[2][2] - m.a[1][2] * m.a[2][0]) +
         m.a[0][2] * (m.a[1][0] * m.a[2][1] - m.a[1][1] * m.a[2][0]);
}

Mat3 adjugate3(const Mat3& m) {
  Mat3 r;
  const auto& a = m.a;
  r.a[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  r.a[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  r.a[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  r.a[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  r.a[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  r.a[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  r.a[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  r.a[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  r.a[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return r;
}

Mat3 mul(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Int s = 0;
      for (int k = 0; k < 3; ++k) s += x.a[i][k] * y.a[k][j];
      r.a[i][j] = s;
    }
  return r;
}

Vec3 mul(const Mat3& m, const Vec3& x) {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    r[i] = m.a[i][0] * x[0] + m.a[i][1] * x[1] + m.a[i][2] * x[2];
  return r;
}

Mat2 mul(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j];
  return r;
}

Mat3 transpose(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = m.a[j][i];
  return r;
}

Mat3 neg(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = -m.a[i][j];
  return r;
}

Mat3 mat_mod_sym(const Mat3& m, const Int& r) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.a[i][j] = mod_sym(m.a[i][j], r);
  return out;
}

Int content(const Vec3& x) {
  return gcd(gcd(iabs(x[0]), iabs(x[1])), iabs(x[2]));
}

Int content(const Mat3& m) {
  Int g = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g = gcd(g, iabs(m.a[i][j]));
  return g;
}

Vec3 primitive_part(const Vec3& x) {
  Int c = content(x);
  check_internal(c != 0, "primitive part of the zero vector");
  return Vec3(x[0] / c, x[1] / c, x[2] / c);
}

Mat3 inverse_unimodular(const Mat3& m) {
  Int d = det3(m);
  check_internal(d == 1 || d == -1, "inverse of a non-unimodular matrix");
  Mat3 adj = adjugate3(m);
  return (d == 1) ? adj : neg(adj);
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

// Row/column elementary operations on A with unimodular trackers:
// invariant L * M0 * R = A throughout.
struct SnfWork {
  Mat3 A, L, R;

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < 3; ++c) { std::swap(A.a[i][c], A.a[j][c]); std::swap(L.a[i][c], L.a[j][c]); }
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < 3; ++r) { std::swap(A.a[r][i], A.a[r][j]); std::swap(R.a[r][i], R.a[r][j]); }
  }
  void addmul_row(int dst, int src, const Int& c) {  // row[dst] += c * row[src]
    for (int k = 0; k < 3; ++k) { A.a[dst][k] += c * A.a[src][k]; L.a[dst][k] += c * L.a[src][k]; }
  }
  void addmul_col(int dst, int src, const Int& c) {
    for (int k = 0; k < 3; ++k) { A.a[k][dst] += c * A.a[k][src]; R.a[k][dst] += c * R.a[k][src]; }
  }
  void negate_row(int i) {
    for (int k = 0; k < 3; ++k) { A.a[i][k] = -A.a[i][k]; L.a[i][k] = -L.a[i][k]; }
  }
};

}  // namespace

Snf3 smith_normal_form(const Mat3& m) {
  SnfWork w{m, Mat3::identity(), Mat3::identity()};

  for (int k = 0; k < 3; ++k) {
    for (;;) {
      // pivot: minimal nonzero absolute value in the trailing block,
      // first in row-major order among ties
      int pi = -1, pj = -1;
      for (int i = k; i < 3; ++i)
        for (int j = k; j < 3; ++j) {
          const Int& x = w.A.a[i][j];
          if (x == 0) continue;
          if (pi < 0 || iabs(x) < iabs(w.A.a[pi][pj])) { pi = i; pj = j; }
        }
      if (pi < 0) break;  // trailing block is zero
      w.swap_rows(k, pi);
      w.swap_cols(k, pj);

      bool clean = true;
      for (int i = k + 1; i < 3; ++i) {
        if (w.A.a[i][k] == 0) continue;
        w.addmul_row(i, k, -rdiv(w.A.a[i][k], w.A.a[k][k]));
        if (w.A.a[i][k] != 0) clean = false;
      }
      for (int j = k + 1; j < 3; ++j) {
        if (w.A.a[k][j] == 0) continue;
        w.addmul_col(j, k, -rdiv(w.A.a[k][j], w.A.a[k][k]));
        if (w.A.a[k][j] != 0) clean = false;
      }
      if (!clean) continue;

      // force the pivot to divide the rest of the trailing block
      bool fixed = false;
      for (int i = k + 1; i < 3 && !fixed; ++i)
        for (int j = k + 1; j < 3 && !fixed; ++j)
          if (w.A.a[i][j] % w.A.a[k][k] != 0) {
            w.addmul_row(k, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (w.A.a[k][k] < 0) w.negate_row(k);
  }

  Snf3 out;
  out.U = inverse_unimodular(w.L);
  out.V = inverse_unimodular(w.R);
  out.D = w.A;

  // postconditions: diagonal, nonnegative, divisibility chain, recomposition
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      check_internal(i == j || out.D.a[i][j] == 0, "SNF not diagonal");
  for (int i = 0; i < 2; ++i) {
    const Int &a = out.D.a[i][i], &b = out.D.a[i + 1][i + 1];
    check_internal(a >= 0 && (a == 0 ? b == 0 : b % a == 0), "SNF divisibility chain");
  }
  check_internal(mul(mul(out.U, out.D), out.V) == m, "SNF recomposition");
  return out;
}

// ---------------------------------------------------------------------------
// SL3 congruence lift
// ---------------------------------------------------------------------------

namespace {

// 2x2 integer matrix with det = 1 congruent to diag(u, v) mod r; needs uv = 1 (mod r).
Mat2 unit_pair_block(const Int& u, const Int& v, const Int& r) {
  auto E12 = [](const Int& t) { Mat2 e = Mat2::identity(); e.a[0][1] = t; return e; };
  auto E21 = [](const Int& t) { Mat2 e = Mat2::identity(); e.a[1][0] = t; return e; };
  Mat2 W;  // [[0,-1],[1,0]]
  W.a[0][1] = -1;
  W.a[1][0] = 1;
  Mat2 g = mul(mul(E12(u), E21(-v)), mul(E12(u), W));
  check_internal(det2(g) == 1, "unit pair block determinant");
  check_internal(mod_pos(g.a[0][0] - u, r) == 0 && mod_pos(g.a[1][1] - v, r) == 0 &&
                     mod_pos(g.a[0][1], r) == 0 && mod_pos(g.a[1][0], r) == 0,
                 "unit pair block congruence");
  return g;
}

Mat3 embed2(const Mat2& g, int i, int j) {
  Mat3 m = Mat3::identity();
  m.a[i][i] = g.a[0][0];
  m.a[i][j] = g.a[0][1];
  m.a[j][i] = g.a[1][0];
  m.a[j][j] = g.a[1][1];
  return m;
}

}  // namespace

Mat3 sl3_lift(const Mat3& m, const Int& r) {
  check_internal(r >= 1, "sl3_lift modulus");
  if (r == 1) return Mat3::identity();
  check_internal(mod_pos(det3(m) - 1, r) == 0, "sl3_lift needs det = 1 (mod r)");

  Snf3 s = smith_normal_form(m);
  const Int d1 = s.D.a[0][0], d2 = s.D.a[1][1];
  Int eps = det3(s.U) * det3(s.V);

  // scale columns (1,2) then (2,3) so the diagonal becomes (1, 1, det) mod r
  Mat3 g1 = embed2(unit_pair_block(inv_mod(d1, r), mod_pos(d1, r), r), 0, 1);
  Int d12 = mod_pos(d1 * d2, r);
  Mat3 g2 = embed2(unit_pair_block(inv_mod(d12, r), d12, r), 1, 2);

  // D*g1*g2 = diag(1, 1, delta) (mod r) with delta = eps; clamp it exactly
  Mat3 clamp = Mat3::diagonal(1, 1, eps);
  Mat3 res = mul(mul(s.U, clamp), mul(inverse_unimodular(mul(g1, g2)), s.V));

  check_internal(det3(res) == 1, "sl3_lift determinant");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      check_internal(mod_pos(res.a[i][j] - m.a[i][j], r) == 0, "sl3_lift congruence");
  return res;
}

// ---------------------------------------------------------------------------
// Hermite normal form (column lattice)
// ---------------------------------------------------------------------------

static Mat3 row_hnf(Mat3 A) {
  for (int c = 0; c < 3; ++c) {
    // clear below the pivot by Euclid on rows >= c
    for (;;) {
      int best = -1;
      for (int i = c; i < 3; ++i)
        if (A.a[i][c] != 0 && (best < 0 || iabs(A.a[i][c]) < iabs(A.a[best][c]))) best = i;
      check_internal(best >= 0, "HNF of a singular matrix");
      if (best != c)
        for (int k = 0; k < 3; ++k) std::swap(A.a[c][k], A.a[best][k]);
      bool clean = true;
      for (int i = c + 1; i < 3; ++i) {
        if (A.a[i][c] == 0) continue;
        Int q = rdiv(A.a[i][c], A.a[c][c]);
        for (int k = 0; k < 3; ++k) A.a[i][k] -= q * A.a[c][k];
        if (A.a[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (A.a[c][c] < 0)
      for (int k = 0; k < 3; ++k) A.a[c][k] = -A.a[c][k];
    // reduce entries above the pivot into [0, pivot)
    for (int i = 0; i < c; ++i) {
      Int q = fdiv(A.a[i][c], A.a[c][c]);
      if (q == 0) continue;
      for (int k = 0; k < 3; ++k) A.a[i][k] -= q * A.a[c][k];
    }
  }
  return A;
}

Mat3 hnf_columns(const Mat3& m) {
  check_internal(det3(m) != 0, "column HNF of a singular matrix");
  return transpose(row_hnf(transpose(m)));
}

Mat3 complete_primitive_to_unimodular(const Vec3& z) {
  check_internal(content(z) == 1, "completion needs a primitive vector");
  // build U with det 1 and U * z = e1, then return its inverse
  Mat3 U = Mat3::identity();
  Vec3 w = z;
  // one 2x2 rotation-like step per coordinate pair, each of determinant 1
  auto clear_pair = [&](int i, int j) {
    if (w[j] == 0) return;
    Int x, y;
    Int g = ext_gcd(w[i], w[j], x, y);
    Mat3 E = Mat3::identity();
    E.a[i][i] = x;         E.a[i][j] = y;
    E.a[j][i] = -w[j] / g; E.a[j][j] = w[i] / g;
    U = mul(E, U);
    w = mul(E, w);
  };
  clear_pair(0, 1);
  clear_pair(0, 2);
  if (w[0] < 0) {  // only hit by z = (-1, 0, 0); flip two signs to keep det 1
    Mat3 E = Mat3::diagonal(-1, -1, 1);
    U = mul(E, U);
    w = mul(E, w);
  }
  check_internal(w[0] == 1 && w[1] == 0 && w[2] == 0, "completion residue");
  Mat3 out = inverse_unimodular(U);
  check_internal(det3(out) == 1, "completion determinant");
  return out;
}

// ---------------------------------------------------------------------------
// 2-D lattices
// ---------------------------------------------------------------------------

Int Lattice2::det() const { return iabs(b1[0] * b2[1] - b1[1] * b2[0]); }

Lattice2 reduce_lattice_basis(Lattice2 L) {
  check_internal(L.det() != 0, "reduction of a degenerate 2-D basis");
  for (;;) {
    if (norm_sq(L.b1) > norm_sq(L.b2)) std::swap(L.b1, L.b2);
    Int mu = rdiv(dot(L.b1, L.b2), norm_sq(L.b1));
    if (mu == 0) break;
    L.b2[0] -= mu * L.b1[0];
    L.b2[1] -= mu * L.b1[1];
  }
  if (norm_sq(L.b1) > norm_sq(L.b2)) std::swap(L.b1, L.b2);
  // canonical signs: first nonzero coordinate positive
  auto fix_sign = [](Vec2& v) {
    if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) { v[0] = -v[0]; v[1] = -v[1]; }
  };
  fix_sign(L.b1);
  fix_sign(L.b2);

  // Hermite-type bound, exact: 3 * |b1|^2 |b2|^2 <= 4 det^2
  Int d = L.det();
  check_internal(3 * norm_sq(L.b1) * norm_sq(L.b2) <= 4 * d * d,
                 "Gauss reduction bound violated");
  return L;
}

Mat2 hnf2_from_generators(const std::vector<Vec2>& gens) {
  // rows (a, b), (0, c); fold generators in one at a time
  Int a = 0, b = 0, c = 0;
  for (const Vec2& g : gens) {
    Int x = g[0], y = g[1];
    while (x != 0) {
      if (a == 0) { a = x; b = y; x = 0; y = 0; break; }
      Int q = fdiv(x, a);
      x -= q * a;
      y -= q * b;
      if (x != 0) { std::swap(a, x); std::swap(b, y); }
    }
    c = gcd(c, iabs(y));
  }
  check_internal(a != 0 && c != 0, "2-D generator set not full rank");
  if (a < 0) { a = -a; b = -b; }
  b = mod_pos(b, c);
  // columns of the result are the basis (a, 0), (b, c) transposed from rows
  Mat2 h;
  h.a[0][0] = a; h.a[0][1] = 0;
  h.a[1][0] = b; h.a[1][1] = c;
  return h;
}

}  // namespace conic
