#include <doctest.h>

#include "oracles.hpp"
#include "pjlab/painleve.hpp"
#include "support.hpp"

using namespace pjlab;
using test::num;
using test::pow2;

namespace {

StencilBundle bundle_at(long bits, const char* a, const char* t, int n,
                        std::optional<long> step = std::nullopt) {
  PrecisionContext ctx(bits);
  return StencilBundle::build(WeightParams::parse(ctx, a, t), n, ctx, Exec::Parallel, step);
}

const ResidualReport& find(const std::vector<ResidualReport>& rs, Relation rel) {
  for (const auto& r : rs)
    if (r.relation == rel) return r;
  FAIL("relation missing from report list");
  return rs.front();
}

}  // namespace

TEST_CASE("stencil bundle layout") {
  auto B = bundle_at(256, "1", "1", 3);
  CHECK(B.step_exponent == 64);
  CHECK(B.h == pow2(256, -64));
  CHECK(B.center().t() == 1);
  CHECK(B.tables[0].t() == 1 - 2 * B.h);
  CHECK(B.tables[4].t() == 1 + 2 * B.h);
  for (const auto& T : B.tables) CHECK(T.n_max == 5);
}

TEST_CASE("t-evolution relations") {
  const long bits = 256;
  const BigReal half = pow2(bits, -bits / 2);
  auto B1 = bundle_at(bits, "1", "1", 1);
  auto r1 = check_t_evolution(B1);
  // p(1, t) vanishes identically, so PNT reduces to r_1 = beta_1 R_1.
  CHECK(find(r1, Relation::PNT).relative <= half);
  CHECK(B1.center().p[1].is_zero());

  auto B3 = bundle_at(bits, "1", "1", 3);
  auto r3 = check_t_evolution(B3);
  CHECK(find(r3, Relation::EQ2).relative <= half);
  CHECK(find(r3, Relation::EQ1).relative <= half);

  auto B0 = bundle_at(bits, "1", "1", 0);
  for (const auto& r : check_t_evolution(B0)) CHECK(r.relation != Relation::EQ2);
}

TEST_CASE("Riccati equations") {
  const long bits = 256;
  auto a = check_riccati(bundle_at(bits, "1", "1", 2));
  CHECK(find(a, Relation::RIC1).relative <= pow2(bits, -bits / 2));
  auto b = check_riccati(bundle_at(bits, "0.5", "2.5", 5));
  CHECK(find(b, Relation::RIC2).relative <= pow2(bits, -bits / 2));
}

TEST_CASE("second-order ODEs, Painleve V and the sigma form") {
  const long bits = 256;
  auto B1 = bundle_at(bits, "1", "1", 1);
  auto odes = check_second_order_odes(B1);
  CHECK(find(odes, Relation::ODE_R).relative <= pow2(bits, -bits / 2 + 16));
  CHECK(find(odes, Relation::ODE_SMALL_R).relative <= pow2(bits, -bits / 2 + 16));
  CHECK(check_sigma_ode(B1).relative <= pow2(bits, -bits / 2 + 24));
  CHECK(check_sigma_ode(bundle_at(bits, "2", "0.5", 4)).relative <= pow2(bits, -bits / 2 + 24));

  auto B5 = bundle_at(512, "1", "1", 5, 128);
  CHECK(check_painleve_v(B5).relative <= num(512, "1e-60"));
  // W_n - 1 > 0 at every stencil point
  for (const auto& T : B5.tables) CHECK(T.R[5] > 0);

  PrecisionContext ctx(256);
  auto pv0 = check_painleve_v_closed_form(WeightParams::parse(ctx, "1", "1"), ctx);
  CHECK(pv0.relative <= pow2(256, -256 / 2 + 16));
  CHECK(pv0.n == 0);

  CHECK_THROWS_AS(check_sigma_ode(bundle_at(bits, "1", "1", 0)), DomainError);
}

TEST_CASE("sigma equals 2t d/dt ln D_n up to n = 20") {
  const long bits = 320;
  for (auto [a, t] : {std::pair{"1", "1"}, {"0.5", "2.5"}, {"2", "0.5"}}) {
    auto B = bundle_at(bits, a, t, 20);
    for (int n = 1; n <= 20; ++n) {
      CAPTURE(n);
      B.n_target = n;
      CHECK(check_sigma_definition(B).relative <= pow2(bits, -bits / 2 + 16));
    }
  }
}

TEST_CASE("sigma derivative is minus the sum of R_j derivatives") {
  auto B = bundle_at(256, "1", "1", 6);
  for (int n : {1, 3, 6}) {
    BigReal ds = B.d1([n](const RecurrenceTable& T) { return T.sigma[n]; });
    BigReal sum(256);
    for (int j = 0; j < n; ++j) sum += B.d1([j](const RecurrenceTable& T) { return T.R[j]; });
    CHECK(abs(ds + sum) <= pow2(256, -256 / 2) * abs(ds));
  }
}

TEST_CASE("differential residuals carry a fourth-order step signature") {
  PrecisionContext ctx(512);
  auto w = WeightParams::parse(ctx, "1", "1");
  for (int n : {1, 3}) {
    auto sig = step_signature(w, n, ctx, 16);
    CHECK(!sig.empty());
    for (const auto& s : sig) {
      CAPTURE(relation_name(s.relation));
      CHECK(s.log2_ratio == doctest::Approx(4.0).epsilon(0.05));
    }
  }
}

TEST_CASE("every differential relation passes at the default tolerance") {
  for (auto [a, t] : {std::pair{"1", "1"}, {"0.5", "2.5"}}) {
    auto B = bundle_at(256, a, t, 8);
    for (int n = 0; n <= 8; ++n) {
      B.n_target = n;
      for (const auto& r : check_all_differential(B)) {
        CAPTURE(r.label());
        CHECK(r.pass);
      }
    }
  }
}
