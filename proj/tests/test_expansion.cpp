#include <doctest.h>

#include <cmath>

#include "pjlab/coulomb.hpp"
#include "pjlab/expansion.hpp"
#include "support.hpp"

using namespace pjlab;
using test::num;
using test::pow2;
using test::rel;

namespace {

WeightParams params(long bits, const char* a, const char* t) {
  return WeightParams::parse(PrecisionContext(bits), a, t);
}

}  // namespace

TEST_CASE("printed coefficients") {
  PrecisionContext ctx(256);
  auto w = params(256, "1", "1");
  auto beta = beta_series(w, ctx);
  CHECK(expansion_eval(beta, BigReal(ctx, 50), 0) == num(256, "0.25"));
  BigReal t23 = cbrt(square(w.t()));
  CHECK(rel(beta.coefficient(-2), -t23 / (4 * cbrt(BigReal(ctx, 4)))) < pow2(256, -250));
  CHECK(beta.coefficient(-1).is_zero());
  CHECK(beta.coefficient(-3).is_zero());
  CHECK(p_series(w, ctx).coefficient(3) == num(256, "-0.25"));

  // At t = 2a several closed forms simplify; the a_2 formula only depends on
  // t, so at (a, t) = (1/2, 1) it must equal the value at (1, 1).
  auto half = beta_series(params(256, "0.5", "1"), ctx);
  CHECK(rel(half.coefficient(-2), beta.coefficient(-2)) < pow2(256, -250));

  for (auto kind : {SeriesKind::BETA, SeriesKind::P, SeriesKind::SIGMA, SeriesKind::LOGD,
                    SeriesKind::A_SERIES, SeriesKind::F_SERIES}) {
    auto s = make_series(kind, w, ctx);
    CHECK(s.kind == kind);
    for (size_t i = 1; i < s.terms.size(); ++i)
      CHECK(s.terms[i - 1].exponent_thirds >= s.terms[i].exponent_thirds);
  }
}

TEST_CASE("multiplier series matches the exact multiplier at large n") {
  PrecisionContext ctx(256);
  auto w = params(256, "1", "1");
  auto a = a_series(w, ctx);
  // leading terms: n ln 4 + 3 t^{2/3} n^{1/3} / 2^{2/3} + a ln 4
  BigReal ln4 = ldexp(BigReal::ln2(256), 1);
  CHECK(rel(a.coefficient(3), ln4) < pow2(256, -250));
  CHECK(rel(a.coefficient(0), w.alpha() * ln4) < pow2(256, -250));
  for (long n : {500L, 4000L}) {
    CAPTURE(n);
    BigReal N(ctx, n);
    BigReal exact = solve_support(w, N, ctx).A;
    BigReal err = abs(exact - expansion_eval(a, N));
    CHECK(err < 10 * pow(cbrt(N), -7));
  }
}

TEST_CASE("unfitted constants") {
  PrecisionContext ctx(256);
  auto s = logd_series(params(256, "1", "1"), ctx);
  CHECK_THROWS_AS(expansion_eval(s, BigReal(ctx, 100)), UnfittedConstant);
  auto full = s.with_constant("c1", BigReal(ctx, 1)).with_constant("c0", BigReal(ctx, 0));
  CHECK_NOTHROW(expansion_eval(full, BigReal(ctx, 100)));
  CHECK_THROWS_AS(s.with_constant("nope", BigReal(ctx, 1)), std::exception);
}

TEST_CASE("decay fit on synthetic data") {
  PrecisionContext ctx(256);
  auto s = beta_series(params(256, "1", "1"), ctx);
  std::vector<std::pair<long, BigReal>> data;
  for (long n = 40; n <= 160; n += 20) {
    BigReal N(ctx, n);
    data.emplace_back(n, expansion_eval(s, N, -2) + 3 * pow(N, -2) * (1 + 1 / N));
  }
  auto fit = decay_fit(data, s, -2);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.01));
  CHECK(fit.used.size() == 7);

  // Exact data at the precision floor is excluded and reported.
  std::vector<std::pair<long, BigReal>> exact;
  for (long n : {40L, 80L, 120L}) exact.emplace_back(n, expansion_eval(s, BigReal(ctx, n), -2));
  exact.emplace_back(160, expansion_eval(s, BigReal(ctx, 160), -2) + num(256, "1e-6"));
  CHECK_THROWS_AS(decay_fit(exact, s, -2), DegenerateFit);
}

TEST_CASE("power coefficient fit recovers known coefficients") {
  PrecisionContext ctx(256);
  std::vector<std::pair<long, BigReal>> data;
  for (long n = 40; n <= 160; n += 10) {
    BigReal N(ctx, n);
    data.emplace_back(n, 2 + 5 * pow(N, -1) - 7 * pow(cbrt(N), -2));
  }
  auto c = fit_power_coefficients(data, {0, -2, -3});
  CHECK(rel(c[0], BigReal(ctx, 2)) < pow2(256, -200));
  CHECK(rel(c[1], BigReal(ctx, -7)) < pow2(256, -200));
  CHECK(rel(c[2], BigReal(ctx, 5)) < pow2(256, -200));
  std::vector<std::pair<long, BigReal>> one = {{40, BigReal(ctx, 1)}};
  CHECK_THROWS_AS(fit_power_coefficients(one, {0, -3}), DegenerateFit);
}

TEST_CASE("ln D_n constants from synthetic data") {
  PrecisionContext ctx(256);
  auto w = params(256, "1", "1");
  auto s = logd_series(w, ctx)
               .with_constant("c1", num(256, "0.75"))
               .with_constant("c0", num(256, "-1.25"));
  std::vector<std::pair<long, BigReal>> pts;
  for (long n : {120L, 160L}) pts.emplace_back(n, expansion_eval(s, BigReal(ctx, n)));
  auto c = fit_logD_constants(pts, w, ctx,
                              std::pair<long, BigReal>{80, expansion_eval(s, BigReal(ctx, 80))});
  CHECK(rel(c.c1, num(256, "0.75")) < pow2(256, -200));
  CHECK(rel(c.c0, num(256, "-1.25")) < pow2(256, -200));
  CHECK(*c.held_out_error < pow2(256, -200));
  CHECK(rel(c.conjecture_gap, abs(num(256, "0.75") - ldexp(BigReal::ln2(256), 1))) < pow2(256, -200));
  std::vector<std::pair<long, BigReal>> dup = {pts[0], pts[0]};
  CHECK_THROWS_AS(fit_logD_constants(dup, w, ctx), DegenerateFit);
}
