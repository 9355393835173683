#include "conic/padic.hpp"

#include "conic/error.hpp"
#include "conic/numtheory.hpp"

namespace conic {

namespace {

TernaryForm reduce_form(const TernaryForm& q, const Int& m) {
  return TernaryForm{mod_pos(q.q11, m), mod_pos(q.q12, m), mod_pos(q.q13, m),
                     mod_pos(q.q22, m), mod_pos(q.q23, m), mod_pos(q.q33, m)};
}

Mat3 mat_mod_pos(const Mat3& a, const Int& m) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.a[i][j] = mod_pos(a.a[i][j], m);
  return out;
}

// Accumulates a substitution working modulo m: the current form is always
// congruent to q o t (mod m), coefficients and matrix entries kept reduced.
struct NormalWork {
  TernaryForm c;
  Mat3 t;
  Int m;

  NormalWork(const TernaryForm& q, Int modulus)
      : c(reduce_form(q, modulus)), t(Mat3::identity()), m(std::move(modulus)) {}

  void apply(const Mat3& e) {
    c = reduce_form(transform(c, e), m);
    t = mat_mod_pos(mul(t, e), m);
  }

  void swap_vars(int i, int j) {
    Mat3 p;
    for (int k = 0; k < 3; ++k) p.a[k][k] = (k == i || k == j) ? 0 : 1;
    p.a[i][j] = 1;
    p.a[j][i] = 1;
    apply(p);
  }

  // substitutes x_i -> x_i + amt * x_j  (row i, column j of the matrix)
  void shear(int i, int j, const Int& amt) {
    Mat3 e = Mat3::identity();
    e.a[i][j] = mod_pos(amt, m);
    apply(e);
  }
};

bool unit_mod(const Int& a, const Int& p) { return a % p != 0; }

// c33 = kappa p^e (mod p^{e+1}) with kappa a unit; extracts kappa.
Int read_unit_scale(const Int& c33, const Int& p, int e, const Int& pe1) {
  Int r = mod_pos(c33, pe1);
  check_internal(r != 0, "x3^2 coefficient vanishes at the working modulus");
  Int pk = ipow(p, static_cast<unsigned>(e));
  check_internal(r % pk == 0, "x3^2 coefficient has too small a p-valuation");
  Int kappa = r / pk;
  check_internal(kappa % p != 0, "x3^2 coefficient has too large a p-valuation");
  return kappa;
}

// Fixes the determinant to 1 at the stated modulus, lifts to an exact det-1
// integer matrix, recomputes q o M exactly, and checks the case congruence.
NormalFormCase finish_case(const TernaryForm& q, const Mat3& t, const Int& p,
                           int e, FormCaseTag tag) {
  Int r = (tag == FormCaseTag::degenerate_line)
              ? p
              : ipow(p, static_cast<unsigned>(e + 1));
  Int d = mod_pos(det3(t), r);
  Mat3 fixed = t;
  if (d != 1)
    fixed = mul(fixed, Mat3::diagonal(1, 1, inv_mod(d, r)));
  Mat3 lifted = sl3_lift(mat_mod_pos(fixed, r), r);

  TernaryForm v = transform(q, lifted);
  Int kappa;
  switch (tag) {
    case FormCaseTag::degenerate_line:
      check_internal(v.q11 % p == 0 && v.q12 % p == 0 && v.q13 % p == 0 &&
                         v.q22 % p == 0 && v.q23 % p == 0,
                     "degenerate-line congruence failed");
      kappa = mod_pos(v.q33, p);
      check_internal(kappa != 0, "degenerate-line pivot is not a unit");
      break;
    case FormCaseTag::split_hyperbolic:
      check_internal(v.q11 % r == 0 && v.q13 % r == 0 && v.q22 % r == 0 &&
                         v.q23 % r == 0 && mod_pos(v.q12, r) == 1,
                     "split-hyperbolic congruence failed");
      kappa = read_unit_scale(v.q33, p, e, r);
      break;
    case FormCaseTag::nonsplit_plane: {
      check_internal(v.q13 % r == 0 && v.q23 % r == 0,
                     "nonsplit-plane congruence failed");
      kappa = read_unit_scale(v.q33, p, e, r);
      // the binary block must have no root mod p
      if (p == 2) {
        check_internal(v.q11 % 2 != 0 && v.q12 % 2 != 0 && v.q22 % 2 != 0,
                       "binary block is reducible mod 2");
      } else {
        Int disc = v.q12 * v.q12 - 4 * v.q11 * v.q22;
        check_internal(legendre_symbol(disc, p) == -1,
                       "binary block is reducible mod p");
      }
      break;
    }
  }
  return NormalFormCase{tag, lifted, kappa};
}

NormalFormCase odd_p_normal_form(const TernaryForm& q, const Int& p, int e) {
  const Int m = ipow(p, static_cast<unsigned>(e + 3));
  NormalWork w(q, m);

  // stage 1: secure a unit at x1^2, by swap or by a transvection that pulls
  // a unit cross coefficient onto the diagonal (2 is a unit here)
  if (!unit_mod(w.c.q11, p)) {
    if (unit_mod(w.c.q22, p)) {
      w.swap_vars(0, 1);
    } else if (unit_mod(w.c.q33, p)) {
      w.swap_vars(0, 2);
    } else if (unit_mod(w.c.q12, p)) {
      w.shear(1, 0, 1);  // x2 -> x1 + x2, new q11 = q11 + q12 + q22
    } else if (unit_mod(w.c.q13, p)) {
      w.shear(2, 0, 1);
    } else if (unit_mod(w.c.q23, p)) {
      w.shear(2, 1, 1);  // unit lands at x2^2
      w.swap_vars(0, 1);
    } else {
      check_internal(false, "form has content divisible by p");
    }
  }
  {
    Int half = inv_mod(2 * w.c.q11, m);
    Mat3 clear = Mat3::identity();
    clear.a[0][1] = mod_pos(-w.c.q12 * half, m);
    clear.a[0][2] = mod_pos(-w.c.q13 * half, m);
    w.apply(clear);
    check_internal(w.c.q12 == 0 && w.c.q13 == 0, "x1 cross terms survived");
  }

  // stage 2: the (x2, x3) block either holds a second unit or is zero mod p
  if (!unit_mod(w.c.q22, p)) {
    if (unit_mod(w.c.q33, p)) {
      w.swap_vars(1, 2);
    } else if (unit_mod(w.c.q23, p)) {
      w.shear(2, 1, 1);
    }
  }

  if (!unit_mod(w.c.q22, p)) {
    // no unit in the block: the single unit variable moves to x3
    w.swap_vars(0, 2);
    return finish_case(q, w.t, p, e, FormCaseTag::degenerate_line);
  }

  {
    Int half = inv_mod(2 * w.c.q22, m);
    Mat3 clear = Mat3::identity();
    clear.a[1][2] = mod_pos(-w.c.q23 * half, m);
    w.apply(clear);
    check_internal(w.c.q23 == 0, "x2x3 term survived");
  }

  const Int a1 = w.c.q11, a2 = w.c.q22;
  if (legendre_symbol(-a1 * a2, p) == -1)
    return finish_case(q, w.t, p, e, FormCaseTag::nonsplit_plane);

  // -a2/a1 is a square: a1 x1^2 + a2 x2^2 factors into two linear forms
  Int tau = sqrt_mod_prime_power(mod_pos(-a2 * inv_mod(a1, m), m), p, e + 3);
  Int s = inv_mod(4 * a2, m);
  Mat3 g = Mat3::identity();
  g.a[0][0] = mod_pos(tau * s, m);
  g.a[0][1] = mod_pos(-tau, m);
  g.a[1][0] = s;
  g.a[1][1] = 1;
  w.apply(g);
  check_internal(w.c.q11 == 0 && w.c.q22 == 0 && w.c.q12 == 1,
                 "hyperbolic factorization failed");
  return finish_case(q, w.t, p, e, FormCaseTag::split_hyperbolic);
}

NormalFormCase two_adic_normal_form(const TernaryForm& q, int e) {
  const Int p = 2;
  const Int m = ipow(2, static_cast<unsigned>(e + 3));
  NormalWork w(q, m);

  bool cross_odd = w.c.q12 % 2 != 0 || w.c.q13 % 2 != 0 || w.c.q23 % 2 != 0;

  if (!cross_odd) {
    // q = (e1 x1 + e2 x2 + e3 x3)^2 mod 2 with ei the diagonal parities;
    // move the square variable onto x3, then absorb the other two
    int i0 = (w.c.q11 % 2 != 0) ? 0 : (w.c.q22 % 2 != 0) ? 1 : 2;
    check_internal(w.c.q33 % 2 != 0 || i0 < 2, "even form slipped through");
    if (i0 != 2) w.swap_vars(i0, 2);
    Mat3 absorb = Mat3::identity();
    absorb.a[2][0] = mod_pos(w.c.q11, 2);
    absorb.a[2][1] = mod_pos(w.c.q22, 2);
    w.apply(absorb);
    return finish_case(q, w.t, p, e, FormCaseTag::degenerate_line);
  }

  // bring an odd cross coefficient to the x1x2 position
  if (w.c.q12 % 2 == 0) {
    if (w.c.q13 % 2 != 0)
      w.swap_vars(1, 2);
    else
      w.swap_vars(0, 2);
  }

  // eliminate the x3 couplings: the 2x2 system has odd determinant
  {
    Int db = 4 * w.c.q11 * w.c.q22 - w.c.q12 * w.c.q12;
    Int inv = inv_mod(db, m);
    Int s = mod_pos(-inv * (2 * w.c.q22 * w.c.q13 - w.c.q12 * w.c.q23), m);
    Int t = mod_pos(-inv * (2 * w.c.q11 * w.c.q23 - w.c.q12 * w.c.q13), m);
    Mat3 el = Mat3::identity();
    el.a[0][2] = s;
    el.a[1][2] = t;
    w.apply(el);
    check_internal(w.c.q13 == 0 && w.c.q23 == 0, "x3 couplings survived");
  }

  if (w.c.q11 % 2 != 0 && w.c.q22 % 2 != 0) {
    // x1^2 + x1x2 + x2^2 shape: no root mod 2
    return finish_case(q, w.t, p, e, FormCaseTag::nonsplit_plane);
  }

  // f(t) = q11 t^2 + q12 t + q22 has a simple root mod 2; Newton-lift it
  Int root = (w.c.q22 % 2 == 0) ? 0 : 1;
  for (int it = 0; it < e + 5; ++it) {
    Int fv = mod_pos(w.c.q11 * root * root + w.c.q12 * root + w.c.q22, m);
    if (fv == 0) break;
    Int fp = mod_pos(2 * w.c.q11 * root + w.c.q12, m);
    root = mod_pos(root - fv * inv_mod(fp, m), m);
  }
  check_internal(
      mod_pos(w.c.q11 * root * root + w.c.q12 * root + w.c.q22, m) == 0,
      "root refinement did not converge");

  w.shear(0, 1, root);  // x1 -> x1 + root x2 kills the x2^2 coefficient
  check_internal(w.c.q22 == 0, "x2^2 coefficient survived the root shift");
  Int beta = w.c.q12;
  check_internal(beta % 2 != 0, "linear factor is not a unit");

  Mat3 el = Mat3::identity();
  el.a[1][0] = mod_pos(-w.c.q11 * inv_mod(beta, m), m);
  el.a[1][1] = inv_mod(beta, m);
  w.apply(el);
  check_internal(w.c.q11 == 0 && w.c.q22 == 0 && w.c.q12 == 1,
                 "hyperbolic normalization failed");
  return finish_case(q, w.t, p, e, FormCaseTag::split_hyperbolic);
}

}  // namespace

NormalFormCase mod_p_normal_form(const TernaryForm& q, const Int& p, int e) {
  check_internal(p >= 2 && e >= 1, "normal form needs a prime and e >= 1");
  check_internal(content(q) % p != 0, "normal form needs p-primitive input");
  check_internal(valuation(stats(q).delta, p) == e,
                 "normal form needs p^e exactly dividing delta");

  // already in split-hyperbolic shape: skip the construction
  Int pe1 = ipow(p, static_cast<unsigned>(e + 1));
  if (q.q11 % pe1 == 0 && q.q13 % pe1 == 0 && q.q22 % pe1 == 0 &&
      q.q23 % pe1 == 0 && mod_pos(q.q12, pe1) == 1) {
    Int r33 = mod_pos(q.q33, pe1);
    Int pk = ipow(p, static_cast<unsigned>(e));
    if (r33 != 0 && r33 % pk == 0 && (r33 / pk) % p != 0)
      return NormalFormCase{FormCaseTag::split_hyperbolic, Mat3::identity(),
                            r33 / pk};
  }

  return (p == 2) ? two_adic_normal_form(q, e) : odd_p_normal_form(q, p, e);
}

StripResult strip_prime(const TernaryForm& q, const Int& p, int e) {
  check_internal(p >= 2 && e >= 0, "strip_prime domain");
  Int delta = stats(q).delta;
  check_internal(delta != 0 && valuation(delta, p) == e,
                 "strip_prime needs p^e exactly dividing delta");

  if (e == 0) {
    return StripResult{{StripBranch{Mat3::identity(), 0, q}}};
  }

  if (content(q) % p == 0) {
    // dividing out p costs p^3 in delta and keeps every branch verbatim
    check_internal(e >= 3, "content prime with e < 3");
    return strip_prime(divide_form_exact(q, p), p, e - 3);
  }

  NormalFormCase nf = mod_p_normal_form(q, p, e);
  TernaryForm qm = transform(q, nf.transform);
  StripResult out;

  switch (nf.tag) {
    case FormCaseTag::degenerate_line: {
      check_internal(e >= 2, "degenerate line forces p^2 | delta");
      Mat3 step = Mat3::diagonal(1, 1, p);
      TernaryForm next = divide_form_exact(transform(qm, step), p);
      StripResult sub = strip_prime(next, p, e - 1);
      Mat3 prefix = mul(nf.transform, step);
      for (const StripBranch& b : sub.branches)
        out.branches.push_back(StripBranch{mul(prefix, b.r), b.mu + 1, b.reduced});
      break;
    }
    case FormCaseTag::nonsplit_plane: {
      require(e >= 2, Errc::anisotropic,
              "form has no p-adic zeros (nonsplit plane at p = " + p.str() + ")");
      Mat3 step = Mat3::diagonal(p, p, 1);
      TernaryForm next = divide_form_exact(transform(qm, step), p * p);
      StripResult sub = strip_prime(next, p, e - 2);
      Mat3 prefix = mul(nf.transform, step);
      for (const StripBranch& b : sub.branches)
        out.branches.push_back(StripBranch{mul(prefix, b.r), b.mu + 2, b.reduced});
      break;
    }
    case FormCaseTag::split_hyperbolic: {
      Int pe = ipow(p, static_cast<unsigned>(e));
      for (int k = 1; k <= e + 1; ++k) {
        Mat3 step = Mat3::diagonal(ipow(p, static_cast<unsigned>(k - 1)),
                                   ipow(p, static_cast<unsigned>(e + 1 - k)), 1);
        out.branches.push_back(StripBranch{
            mul(nf.transform, step), e,
            divide_form_exact(transform(qm, step), pe)});
      }
      break;
    }
  }

  check_internal(!out.branches.empty() &&
                     out.branches.size() <= static_cast<std::size_t>(e) + 1,
                 "branch count out of range");
  check_internal(e != 1 || out.branches.size() == 2, "e = 1 must give 2 branches");
  Int pe = ipow(p, static_cast<unsigned>(e));
  for (const StripBranch& b : out.branches) {
    check_internal(b.mu <= e && (e - b.mu) % 3 == 0, "branch exponent invariants");
    check_internal(det3(b.r) == ipow(p, static_cast<unsigned>(b.mu)),
                   "branch determinant is not p^mu");
    check_internal(stats(b.reduced).delta * pe == delta,
                   "reduced branch has the wrong delta");
  }
  return out;
}

Mat3 split_unit_form(const TernaryForm& q, const Vec3& z) {
  check_internal(stats(q).delta == 1, "split needs delta = 1");
  check_internal(content(z) == 1 && evaluate(q, z) == 0,
                 "split needs a primitive zero");

  Mat3 m0 = complete_primitive_to_unimodular(z);
  TernaryForm f = transform(q, m0);
  check_internal(f.q11 == 0, "zero did not annihilate x1^2");

  // delta = -q12^2 q33 + q12 q13 q23 - q22 q13^2 = 1 forces gcd(q12,q13) = 1
  Int u, v;
  Int g = ext_gcd(f.q12, f.q13, u, v);
  check_internal(g == 1, "linear part of x1 is imprimitive");
  Mat3 vmat = Mat3::identity();
  vmat.a[1][1] = f.q13;
  vmat.a[1][2] = u;
  vmat.a[2][1] = -f.q12;
  vmat.a[2][2] = v;
  TernaryForm f2 = transform(f, vmat);
  check_internal(f2.q11 == 0 && f2.q12 == 0 && f2.q13 == 1,
                 "x1x3 shape not reached");

  Mat3 shear = Mat3::identity();
  shear.a[0][1] = -f2.q23;
  shear.a[0][2] = -f2.q33;
  Mat3 m = mul(mul(m0, vmat), shear);

  TernaryForm out = transform(q, m);
  check_internal(out.q22 == -1, "x2^2 coefficient must be -1 at delta 1");
  check_internal(out == split_form(), "split postcondition failed");
  check_internal(det3(m) == 1, "split matrix must have det 1");
  return m;
}

}  // namespace conic
