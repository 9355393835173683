#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "conic/counting.hpp"
#include "conic/decompose.hpp"
#include "conic/density.hpp"
#include "conic/error.hpp"
#include "conic/parallel.hpp"
#include "helpers.hpp"

using namespace conic;
using testutil::Rng;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return Errc::internal;  // placeholder meaning "did not throw"
}

const Weight kSmooth{WeightKind::smooth_bump, 1.0};
const Weight kSup{WeightKind::sharp_sup, 1.0};
const Weight kL2{WeightKind::sharp_l2, 1.0};

}  // namespace

TEST_CASE("triangle kernel") {
  for (double T : {1.0, 16.0, 4096.0}) {
    CHECK(kernel_kt(0, T) == T);
    CHECK(kernel_kt(1.0 / T, T) == 0);
    CHECK(kernel_kt(2.0 / T, T) == 0);
    CHECK(kernel_kt(-0.5 / T, T) == doctest::Approx(0.5 * T));
  }

  // unit mass: midpoint with an even cell count is exact on each linear leg
  double T = 8;
  int n = 4096;
  double h = (2.0 / T) / n, mass = 0;
  for (int i = 0; i < n; ++i)
    mass += kernel_kt(-1.0 / T + (i + 0.5) * h, T) * h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(code_of([] { kernel_kt(0.0, 0.0); }) == Errc::malformed_input);
  CHECK(code_of([] { kernel_kt(0.0, -2.0); }) == Errc::malformed_input);
}

TEST_CASE("weight functions") {
  CHECK(weight_value(kSmooth, 0, 0, 0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(weight_value(kSmooth, 1, 0, 0) == 0);
  CHECK(weight_value(kSmooth, 0.6, 0.0, 0.8) == 0);
  CHECK(weight_value(kSmooth, 0.5, 0.5, 0.5) ==
        doctest::Approx(std::exp(-4.0)).epsilon(1e-12));

  CHECK(weight_value(kSup, 0.99, -0.99, 0.99) == 1);
  CHECK(weight_value(kSup, 1.01, 0, 0) == 0);
  CHECK(weight_value(kL2, 0.5, 0.5, 0.5) == 1);
  CHECK(weight_value(kL2, 0.9, 0.9, 0) == 0);

  // the scale stretches the support radius
  Weight wide{WeightKind::smooth_bump, 2.0};
  CHECK(weight_value(wide, 1, 1, 1) ==
        doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  CHECK(weight_value(kSmooth, -0.3, 0.1, 0.2) ==
        weight_value(kSmooth, 0.3, -0.1, -0.2));

  Weight bad{WeightKind::sharp_sup, 0.0};
  CHECK(code_of([&] { weight_value(bad, 0, 0, 0); }) ==
        Errc::malformed_input);
}

TEST_CASE("plane pushforward of the split form") {
  Decomposition dj = decompose(split_form());
  const ZeroClass& cls = dj.classes[0];

  DensityEstimate smooth = sigma_infinity_2d(split_form(), cls, kSmooth);
  CHECK(smooth.method == DensityMethod::pushforward_2d);
  CHECK(smooth.converged);
  CHECK(smooth.value == doctest::Approx(1.496925466302).epsilon(1e-7));
  CHECK(smooth.est_error < 1e-6);

  SUBCASE("sup indicator integrates the unit square") {
    // support of 1_{|M x^2|_sup <= 1} through the identity matrix is
    // exactly [-1, 1]^2, so the density is 8
    DensityEstimate sharp = sigma_infinity_2d(split_form(), cls, kSup);
    CHECK_FALSE(sharp.converged);
    CHECK(std::abs(sharp.value - 8.0) <= sharp.est_error);
    CHECK(sharp.value == doctest::Approx(8.0).epsilon(1e-2));
  }

  SUBCASE("euclidean indicator matches a polar reference") {
    // area of x1^4 + (x1 x2)^2 + x2^4 <= 1 by a 1-d angular integral
    int n = 1 << 16;
    double ref = 0;
    for (int i = 0; i < n; ++i) {
      double th = (i + 0.5) * (2 * std::numbers::pi / n);
      double s = std::sin(2 * th);
      ref += 0.5 / std::sqrt(1.0 - 0.25 * s * s);
    }
    ref *= 2 * std::numbers::pi / n;  // area
    DensityEstimate sharp = sigma_infinity_2d(split_form(), cls, kL2);
    CHECK(sharp.value == doctest::Approx(2 * ref).epsilon(2e-3));
  }

  SUBCASE("density is linear in the support scale") {
    DensityEstimate one = sigma_infinity_2d(split_form(), cls, kSup);
    DensityEstimate two =
        sigma_infinity_2d(split_form(), cls, {WeightKind::sharp_sup, 2.0});
    CHECK(two.value == doctest::Approx(2 * one.value).epsilon(1e-6));
    DensityEstimate sm2 =
        sigma_infinity_2d(split_form(), cls, {WeightKind::smooth_bump, 2.0});
    CHECK(sm2.value == doctest::Approx(2 * smooth.value).epsilon(1e-9));
  }

  SUBCASE("degenerate input") {
    TernaryForm singular{1, 0, 0, -1, 0, 0};
    CHECK(code_of([&] { sigma_infinity_2d(singular, cls, kSmooth); }) ==
          Errc::degenerate);
  }
}

TEST_CASE("pushforward does not depend on the class used") {
  struct Fixture {
    const char* text;
    double value;
  };
  const Fixture table[] = {
      {"-61 0 -22 -38 99 39", 0.015810873666},
      {"0 1 0 0 0 -25", 0.327790688741},
      {"0 1 0 0 0 -8", 0.574049285557},
      {"1 0 0 2 0 -8", 0.378764659357},
  };
  for (const Fixture& fx : table) {
    Decomposition dec = decompose(parse_form(fx.text));
    std::vector<double> values;
    for (const ZeroClass& cls : dec.classes)
      values.push_back(sigma_infinity_2d(dec.form, cls, kSmooth).value);
    for (double v : values) {
      CHECK(std::abs(v - values[0]) <= 1e-4 * values[0]);
      CHECK(v == doctest::Approx(fx.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("kernel route") {
  CHECK(code_of([] {
          sigma_infinity_3d(split_form(), {WeightKind::sharp_sup, 1.0});
        }) == Errc::malformed_input);
  CHECK(code_of([] {
          sigma_infinity_3d(split_form(), {WeightKind::smooth_bump, 1.0},
                            {64.0});
        }) == Errc::malformed_input);
  CHECK(code_of([] {
          sigma_infinity_3d(split_form(), {WeightKind::smooth_bump, 1.0},
                            {64.0, 32.0});
        }) == Errc::malformed_input);

  // a short stage list keeps this quick; the full default schedule is
  // exercised by the acceptance run
  std::vector<double> stages{8, 16, 32, 64};
  for (const char* text : {"0 0 1 -1 0 0", "1 0 0 2 0 -8"}) {
    TernaryForm q = parse_form(text);
    Decomposition dec = decompose(q);
    DensityEstimate flat = sigma_infinity_2d(q, dec.classes[0], kSmooth);
    DensityEstimate vol = sigma_infinity_3d(q, kSmooth, stages);
    CHECK(vol.method == DensityMethod::kernel_3d);
    CHECK(vol.value > 0);
    double gap = std::abs(flat.value - vol.value);
    CHECK(gap <= 0.02 * std::max(flat.value, vol.value));
    CHECK(gap <= flat.est_error + vol.est_error);
  }
}

TEST_CASE("eigenvalue diagnostics") {
  EigenReport ej = eigen_diagnostics(split_form());
  CHECK(ej.lambda == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ej.mu == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(ej.nu == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ej.product_error <= 1e-9);
  CHECK(ej.in_window);
  CHECK(ej.casewise_ok);
  CHECK(ej.sharp_dominated);

  SUBCASE("sample form spectrum against the symmetric functions") {
    TernaryForm q0 = testutil::sample_form_61();
    EigenReport er = eigen_diagnostics(q0);
    CHECK(er.lambda == doctest::Approx(127.984008).epsilon(1e-5));
    CHECK(er.mu == doctest::Approx(133.637199).epsilon(1e-5));
    CHECK(er.nu == doctest::Approx(114.346810).epsilon(1e-5));
    CHECK(er.product_error <= 1e-9);

    FormStats st = stats(q0);
    double tr = 0, tr2 = 0;
    for (int i = 0; i < 3; ++i) {
      tr += to_double(st.gram.a[i][i]);
      for (int j = 0; j < 3; ++j)
        tr2 += to_double(st.gram.a[i][j]) * to_double(st.gram.a[j][i]);
    }
    double e1 = er.lambda - er.mu - er.nu;
    double e2 = -er.lambda * er.mu - er.lambda * er.nu + er.mu * er.nu;
    CHECK(e1 == doctest::Approx(tr).epsilon(1e-9));
    CHECK(e2 == doctest::Approx(0.5 * (tr * tr - tr2)).epsilon(1e-9));

    CHECK(er.in_window);
    CHECK(er.casewise_ok);
    CHECK(er.sharp_dominated);
    CHECK(er.sigma_w0 == doctest::Approx(0.015810873666).epsilon(1e-6));
    CHECK(er.sigma_sharp == doctest::Approx(0.089084060).epsilon(1e-4));
  }

  SUBCASE("bounds hold across random scrambles") {
    Rng rng(9091);
    int done = 0;
    for (int trial = 0; trial < 220 && done < 100; ++trial) {
      Mat3 v = testutil::rand_nonsingular(rng, -4, 4);
      TernaryForm q = transform(split_form(), v);
      Int c = content(q);
      if (c > 1) q = divide_form_exact(q, c);
      EigenReport er = eigen_diagnostics(q, 1e-3, 1e3, false);
      CHECK(er.product_error <= 1e-9);
      CHECK(er.in_window);
      CHECK(er.casewise_ok);
      CHECK(er.sigma_w0 > 0);
      ++done;
    }
    CHECK(done == 100);
  }

  SUBCASE("rejections") {
    CHECK(code_of([] { eigen_diagnostics(parse_form("1 0 0 1 0 1")); }) ==
          Errc::anisotropic);
    CHECK(code_of([] {
            eigen_diagnostics(TernaryForm{1, 0, 0, -1, 0, 0});
          }) == Errc::degenerate);
  }
}

TEST_CASE("quadrature does not depend on the worker count") {
  Decomposition dq = decompose(testutil::sample_form_61());
  set_thread_count(1);
  double a1 = sigma_infinity_2d(dq.form, dq.classes[0], kSmooth).value;
  double b1 = sigma_infinity_2d(dq.form, dq.classes[0], kSup).value;
  set_thread_count(3);
  double a3 = sigma_infinity_2d(dq.form, dq.classes[0], kSmooth).value;
  double b3 = sigma_infinity_2d(dq.form, dq.classes[0], kSup).value;
  set_thread_count(0);
  CHECK(a1 == a3);
  CHECK(b1 == b3);
}

TEST_CASE("densities predict the raw counts") {
  // raw vector count grows like (1/2) sigma_sup S B; the sup-indicator
  // density feeds predict_total and lands within a percent at modest B
  TernaryForm q = parse_form("1 0 0 2 0 -8");
  Decomposition dec = decompose(q);
  double sigma = sigma_infinity_2d(q, dec.classes[0], kSup).value;
  TotalPrediction tp = predict_total(dec, sigma);
  double b = 20000;
  long long raw = 0;
  for (const ZeroClass& cls : dec.classes)
    raw += count_class(q, cls, b, Height::sup_norm);
  CHECK(raw / b == doctest::Approx(tp.coefficient).epsilon(0.01));

  TernaryForm q0 = testutil::sample_form_61();
  Decomposition dq = decompose(q0);
  double s0 = sigma_infinity_2d(q0, dq.classes[0], kSup).value;
  TotalPrediction t0 = predict_total(dq, s0);
  long long raw0 = 0;
  for (const ZeroClass& cls : dq.classes)
    raw0 += count_class(q0, cls, 50000, Height::sup_norm);
  CHECK(raw0 / 50000.0 == doctest::Approx(t0.coefficient).epsilon(0.02));
}
