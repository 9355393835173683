#include "conic/forms.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "conic/error.hpp"

namespace conic {

TernaryForm split_form() { return TernaryForm{0, 0, 1, -1, 0, 0}; }

namespace {

bool looks_like_integer(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

}  // namespace

TernaryForm parse_form(const std::string& text, bool divide_content) {
  std::istringstream in(text);
  std::vector<Int> c;
  std::string tok;
  while (in >> tok) {
    require(looks_like_integer(tok), Errc::malformed_input,
            "form coefficient is not an integer: " + tok);
    // the big-integer parser rejects an explicit leading plus
    c.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
  }
  require(c.size() == 6, Errc::malformed_input,
          "a form needs exactly six coefficients");

  TernaryForm q{c[0], c[1], c[2], c[3], c[4], c[5]};
  Int g = content(q);
  require(g != 0, Errc::degenerate, "the zero form is singular");
  if (g > 1) {
    require(divide_content, Errc::degenerate,
            "imprimitive form (content " + g.str() + "); pass --divide-content");
    q = divide_form_exact(q, g);
  }

  Int delta = stats(q).delta;
  require(delta != 0, Errc::degenerate, "singular form");
  if (delta < 0) {
    q = TernaryForm{-q.q11, -q.q12, -q.q13, -q.q22, -q.q23, -q.q33};
  }
  return q;
}

std::string form_to_text(const TernaryForm& q) {
  std::ostringstream out;
  out << q.q11 << ' ' << q.q12 << ' ' << q.q13 << ' ' << q.q22 << ' ' << q.q23
      << ' ' << q.q33;
  return out.str();
}

FormStats stats(const TernaryForm& q) {
  FormStats s;
  s.gram.a[0][0] = 2 * q.q11; s.gram.a[0][1] = q.q12;     s.gram.a[0][2] = q.q13;
  s.gram.a[1][0] = q.q12;     s.gram.a[1][1] = 2 * q.q22; s.gram.a[1][2] = q.q23;
  s.gram.a[2][0] = q.q13;     s.gram.a[2][1] = q.q23;     s.gram.a[2][2] = 2 * q.q33;
  Int d = det3(s.gram);
  check_internal(d % 2 == 0, "gram determinant must be even");
  s.delta = d / 2;
  s.norm_sq = 4 * q.q11 * q.q11 + 2 * q.q12 * q.q12 + 2 * q.q13 * q.q13 +
              4 * q.q22 * q.q22 + 2 * q.q23 * q.q23 + 4 * q.q33 * q.q33;
  double norm = std::sqrt(to_double(s.norm_sq));
  s.aspect_ratio = (s.delta == 0) ? 0.0 : norm * norm * norm / to_double(s.delta);
  return s;
}

Int evaluate(const TernaryForm& q, const Vec3& x) {
  return q.q11 * x[0] * x[0] + q.q12 * x[0] * x[1] + q.q13 * x[0] * x[2] +
         q.q22 * x[1] * x[1] + q.q23 * x[1] * x[2] + q.q33 * x[2] * x[2];
}

TernaryForm transform(const TernaryForm& q, const Mat3& m) {
  Mat3 g = stats(q).gram;
  Mat3 gm = mul(mul(transpose(m), g), m);
  check_internal(gm.a[0][0] % 2 == 0 && gm.a[1][1] % 2 == 0 && gm.a[2][2] % 2 == 0,
                 "transformed gram matrix must have even diagonal");
  return TernaryForm{gm.a[0][0] / 2, gm.a[0][1], gm.a[0][2],
                     gm.a[1][1] / 2, gm.a[1][2], gm.a[2][2] / 2};
}

Int content(const TernaryForm& q) {
  Int g = gcd(gcd(iabs(q.q11), iabs(q.q12)), iabs(q.q13));
  g = gcd(gcd(g, iabs(q.q22)), gcd(iabs(q.q23), iabs(q.q33)));
  return g;
}

TernaryForm divide_form_exact(const TernaryForm& q, const Int& d) {
  check_internal(d != 0 && content(q) % d == 0, "inexact form division");
  return TernaryForm{q.q11 / d, q.q12 / d, q.q13 / d,
                     q.q22 / d, q.q23 / d, q.q33 / d};
}

namespace {

// Candidate pair (x1, x2): solve q33 t^2 + b t + c = 0 over the integers,
// trying the two roots in a fixed order.
struct Int64Coeffs {
  std::int64_t q11, q12, q13, q22, q23, q33;
};

bool try_roots_int64(const Int64Coeffs& q, std::int64_t x1, std::int64_t x2,
                     Vec3& out) {
  std::int64_t b = q.q13 * x1 + q.q23 * x2;
  std::int64_t c = q.q11 * x1 * x1 + q.q12 * x1 * x2 + q.q22 * x2 * x2;
  std::int64_t disc = b * b - 4 * q.q33 * c;
  if (disc < 0) return false;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(disc)));
  while (s > 0 && s * s > disc) --s;
  while ((s + 1) * (s + 1) <= disc) ++s;
  if (s * s != disc) return false;
  for (std::int64_t num : {-b + s, -b - s}) {
    if (num % (2 * q.q33) != 0) continue;
    out = Vec3(x1, x2, num / (2 * q.q33));
    return true;
  }
  return false;
}

bool try_roots_big(const TernaryForm& q, const Int& x1, const Int& x2, Vec3& out) {
  Int b = q.q13 * x1 + q.q23 * x2;
  Int c = q.q11 * x1 * x1 + q.q12 * x1 * x2 + q.q22 * x2 * x2;
  Int disc = b * b - 4 * q.q33 * c;
  Int s;
  if (!is_square(disc, &s)) return false;
  for (const Int& num : {Int(-b + s), Int(-b - s)}) {
    if (num % (2 * q.q33) != 0) continue;
    out = Vec3(x1, x2, num / (2 * q.q33));
    return true;
  }
  return false;
}

}  // namespace

std::optional<Vec3> find_isotropic(const TernaryForm& q, double bound_multiplier) {
  if (q.q33 == 0) return Vec3(0, 0, 1);

  FormStats st = stats(q);
  // search radius at least 10 * bound_multiplier * ||q||, kept exact
  Int mult_sq = Int(static_cast<long long>(
      std::ceil(100.0 * bound_multiplier * bound_multiplier)));
  Int radius = isqrt_floor(st.norm_sq * mult_sq) + 1;

  // int64 kernel is safe when the worst-case discriminant stays below 2^62
  Int abs_b_max = (iabs(q.q13) + iabs(q.q23)) * radius;
  Int abs_c_max = (iabs(q.q11) + iabs(q.q12) + iabs(q.q22)) * radius * radius;
  Int disc_max = abs_b_max * abs_b_max + 4 * iabs(q.q33) * abs_c_max;
  bool small = fits_int64(disc_max) && to_int64(disc_max) < (std::int64_t{1} << 62);

  Vec3 hit;
  auto scan_ring = [&](const Int& ring) -> bool {
    if (small) {
      Int64Coeffs qc{to_int64(q.q11), to_int64(q.q12), to_int64(q.q13),
                     to_int64(q.q22), to_int64(q.q23), to_int64(q.q33)};
      std::int64_t s = to_int64(ring);
      for (std::int64_t x1 = -s; x1 <= s; ++x1) {
        if (x1 == -s || x1 == s) {
          for (std::int64_t x2 = -s; x2 <= s; ++x2)
            if (try_roots_int64(qc, x1, x2, hit)) return true;
        } else {
          if (try_roots_int64(qc, x1, -s, hit)) return true;
          if (s != 0 && try_roots_int64(qc, x1, s, hit)) return true;
        }
      }
    } else {
      for (Int x1 = -ring; x1 <= ring; ++x1) {
        if (x1 == -ring || x1 == ring) {
          for (Int x2 = -ring; x2 <= ring; ++x2)
            if (try_roots_big(q, x1, x2, hit)) return true;
        } else {
          if (try_roots_big(q, x1, -ring, hit)) return true;
          if (ring != 0 && try_roots_big(q, x1, ring, hit)) return true;
        }
      }
    }
    return false;
  };

  // rings of growing sup-norm; (0,0) only yields the trivial vector
  for (Int ring = 1; ring <= radius; ++ring) {
    if (scan_ring(ring)) {
      Vec3 z = primitive_part(hit);
      check_internal(evaluate(q, z) == 0, "isotropic candidate must vanish");
      return z;
    }
  }
  return std::nullopt;
}

}  // namespace conic
