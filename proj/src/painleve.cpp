#include "pjlab/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pjlab/derivative.hpp"
#include "pjlab/special.hpp"

namespace pjlab {

namespace {

BigReal tol_or_default(const std::optional<BigReal>& tol, long bits) {
  return tol ? convert(*tol, bits) : default_tolerance(bits);
}

std::array<BigReal, 5> rebits(const std::array<BigReal, 5>& ts, long bits) {
  return {convert(ts[0], bits), convert(ts[1], bits), convert(ts[2], bits), convert(ts[3], bits),
          convert(ts[4], bits)};
}

std::vector<RecurrenceTable> build_five(const WeightParams& params,
                                        const std::array<BigReal, 5>& ts, int n_max,
                                        const PrecisionContext& ctx, Exec exec, int escalations) {
  std::vector<std::optional<RecurrenceTable>> slots(5);
  auto one = [&](int i) {
    // The centre keeps the parsed parameters; the others shift t only.
    WeightParams w = i == 2 ? params.at_precision(ctx.bits()) : params.with_t(ts[i]);
    slots[i] = build_table(w, n_max, ctx, Exec::Serial, escalations);
  };
  if (exec == Exec::Parallel) {
    ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < 5; ++i) err.run([&] { one(i); });
    err.rethrow();
  } else {
    for (int i = 0; i < 5; ++i) one(i);
  }
  std::vector<RecurrenceTable> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

StencilBundle StencilBundle::build(const WeightParams& params, int n_target,
                                   const PrecisionContext& ctx, Exec exec,
                                   std::optional<long> step_exponent) {
  if (n_target < 0) throw DomainError("stencil degree must be non-negative");
  const long e = step_exponent.value_or(ctx.fd_step_exponent());
  WeightParams base = params.at_precision(ctx.bits());
  auto ts = stencil_points(base.t(), e);
  const int n_max = n_target + 2;

  auto tables = build_five(base, ts, n_max, ctx, exec, 2);
  long top = 0;
  for (const auto& t : tables) top = std::max(top, t.bits());
  if (top != ctx.bits()) {
    PrecisionContext up = ctx.with_bits(top);
    base = params.at_precision(top);
    ts = rebits(ts, top);
    tables = build_five(base, ts, n_max, up, exec, 0);
  }
  BigReal h = ldexp(BigReal(top, 1), -e);
  return StencilBundle{base,
                       n_target,
                       e,
                       ts[2],
                       std::move(h),
                       {std::move(tables[0]), std::move(tables[1]), std::move(tables[2]),
                        std::move(tables[3]), std::move(tables[4])}};
}

std::array<BigReal, 5> StencilBundle::sample(const Field& f) const {
  return {f(tables[0]), f(tables[1]), f(tables[2]), f(tables[3]), f(tables[4])};
}

BigReal StencilBundle::d1(const Field& f) const {
  return stencil_derivative(sample(f), step_exponent, DerivativeOrder::First);
}

BigReal StencilBundle::d2(const Field& f) const {
  return stencil_derivative(sample(f), step_exponent, DerivativeOrder::Second);
}

PainleveVParams PainleveVParams::for_degree(int n, const BigReal& alpha) {
  const long bits = alpha.bits();
  BigReal c = ldexp(alpha, 1) + (2 * n + 1);
  return {ldexp(square(c), -3), BigReal::ratio(PrecisionContext(bits), -1, 8), alpha,
          BigReal::ratio(PrecisionContext(bits), -1, 2)};
}

// ---------------------------------------------------------------------------

std::vector<ResidualReport> check_t_evolution(const StencilBundle& B,
                                              const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  const auto& T = B.center();
  const long bits = T.bits();
  const BigReal tol = tol_or_default(tolerance, bits);
  const BigReal two_t = ldexp(T.t(), 1);
  std::vector<ResidualReport> out;

  BigReal dlogh = B.d1([n](const RecurrenceTable& x) { return log(x.h[n]); });
  out.push_back(TermSum(bits).add(two_t * dlogh).add(T.R[n]).report(Relation::EQ1, n, T.params, tol));

  BigReal dp = B.d1([n](const RecurrenceTable& x) { return x.p[n]; });
  out.push_back(TermSum(bits)
                    .add(two_t * dp).add(-T.r[n]).add(T.beta[n] * T.R[n])
                    .report(Relation::PNT, n, T.params, tol));

  if (n >= 1) {
    BigReal db = B.d1([n](const RecurrenceTable& x) { return x.beta[n]; });
    out.push_back(TermSum(bits)
                      .add(two_t * db).add(-(T.beta[n] * T.R[n - 1])).add(T.beta[n] * T.R[n])
                      .report(Relation::EQ2, n, T.params, tol));
  }
  return out;
}

std::vector<ResidualReport> check_riccati(const StencilBundle& B,
                                          const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  const auto& T = B.center();
  const long bits = T.bits();
  const BigReal tol = tol_or_default(tolerance, bits);
  const BigReal& t = T.t();
  const BigReal two_t = ldexp(t, 1);
  const BigReal c = ldexp(T.alpha(), 1) + (2 * n + 1);
  const BigReal k = T.alpha() - t + (n + 1);  // n + a + 1 - t
  const BigReal& R = T.R[n];
  const BigReal& r = T.r[n];
  std::vector<ResidualReport> out;

  BigReal dr = B.d1([n](const RecurrenceTable& x) { return x.r[n]; });
  out.push_back(TermSum(bits)
                    .add(two_t * dr)
                    .add(-(two_t * n))
                    .add(square(r))
                    .add(-ldexp(k * r, 1))
                    .add(ldexp(c * (square(r) + two_t * r), 1) / R)
                    .report(Relation::RIC1, n, T.params, tol));

  BigReal dR = B.d1([n](const RecurrenceTable& x) { return x.R[n]; });
  out.push_back(TermSum(bits)
                    .add(two_t * dR)
                    .add(-square(R))
                    .add(-ldexp(k * R, 1))
                    .add(ldexp(r * (c + R), 1))
                    .add(two_t * c)
                    .report(Relation::RIC2, n, T.params, tol));
  return out;
}

std::vector<ResidualReport> check_second_order_odes(const StencilBundle& B,
                                                    const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  if (n < 1) throw DomainError("second-order ODE checks need n >= 1");
  const auto& T = B.center();
  const long bits = T.bits();
  const BigReal tol = tol_or_default(tolerance, bits);
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  const BigReal t2 = square(t);
  const BigReal c = ldexp(a, 1) + (2 * n + 1);
  const BigReal m = a + n;
  std::vector<ResidualReport> out;

  {
    auto f = [n](const RecurrenceTable& x) { return x.R[n]; };
    const BigReal& R = T.R[n];
    BigReal R1 = B.d1(f), R2 = B.d2(f);
    BigReal R_2 = square(R);
    TermSum s(bits);
    s.add(8 * t2 * R * (c + R) * R2);
    s.add(-(4 * t2 * (ldexp(c, 1) + 3 * R) * square(R1)));
    s.add(8 * t * R * (c + R) * R1);
    s.add(-(square(R_2) * R));
    s.add(-ldexp(c * square(R_2), 1));
    s.add(-ldexp((m * (m + 1) - t * (t - ldexp(a, 1))) * R_2 * R, 2));
    s.add(16 * t * c * (t - a) * R_2);
    s.add(4 * t * square(c) * (5 * t - ldexp(a, 1)) * R);
    s.add(8 * t2 * square(c) * c);
    out.push_back(s.report(Relation::ODE_R, n, T.params, tol, Normalization::LargestTerm));
  }
  {
    auto f = [n](const RecurrenceTable& x) { return x.r[n]; };
    const BigReal& r = T.r[n];
    BigReal r1 = B.d1(f), r2 = B.d2(f);
    BigReal r_2 = square(r);
    TermSum s(bits);
    s.add(4 * t2 * r * (ldexp(t, 1) + r) * r2);
    s.add(-(4 * t2 * (t + r) * square(r1)));
    s.add(4 * t * r_2 * r1);
    s.add(-(square(r_2) * r));
    s.add(-((ldexp(a, 1) + 5 * t + 2 * n) * square(r_2)));
    s.add(-(8 * t * (m + t) * r_2 * r));
    s.add(-(4 * t * (square(t + a) + n * (ldexp(t, 1) + a) - 1) * r_2));
    s.add(4 * n * n * t2 * r);
    s.add(4 * n * n * t2 * t);
    out.push_back(s.report(Relation::ODE_SMALL_R, n, T.params, tol, Normalization::LargestTerm));
  }
  return out;
}

namespace {

ResidualReport painleve_v_residual(int n, const WeightParams& params, const BigReal& W,
                                   const BigReal& W1, const BigReal& W2, const BigReal& tol) {
  const long bits = W.bits();
  const BigReal& t = params.t();
  auto mu = PainleveVParams::for_degree(n, params.alpha());
  BigReal Wm1 = W - 1;
  TermSum s(bits);
  s.add(W2);
  s.add(-((3 * W - 1) * square(W1) / ldexp(W * Wm1, 1)));
  s.add(W1 / t);
  s.add(-(square(Wm1) / square(t) * (mu.mu1 * W + mu.mu2 / W)));
  s.add(-(mu.mu3 * W / t));
  s.add(-(mu.mu4 * W * (W + 1) / Wm1));
  return s.report(Relation::PV, n, params, tol);
}

}  // namespace

ResidualReport check_painleve_v(const StencilBundle& B, const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  const auto& T = B.center();
  const BigReal c = ldexp(T.alpha(), 1) + (2 * n + 1);
  auto W = [n, &c](const RecurrenceTable& x) {
    BigReal w = 1 + convert(x.R[n], x.bits()) / convert(c, x.bits());
    if (!(w > 1)) throw InvariantViolation("W_n must exceed 1");
    return w;
  };
  return painleve_v_residual(n, T.params, W(T), B.d1(W), B.d2(W),
                             tol_or_default(tolerance, T.bits()));
}

ResidualReport check_painleve_v_closed_form(const WeightParams& params_in,
                                            const PrecisionContext& ctx,
                                            const std::optional<BigReal>& tolerance, Exec exec) {
  WeightParams params = params_in.at_precision(ctx.bits());
  const BigReal& a = params.alpha();
  const long e = ctx.fd_step_exponent();
  auto ts = stencil_points(params.t(), e);
  BigReal half = BigReal::ratio(ctx, 1, 2);
  BigReal c = ldexp(a, 1) + 1;
  std::array<BigReal, 5> W{BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx)};
  auto one = [&](int i) {
    // Each U call is itself serial here; the five points run side by side.
    BigReal num = kummer_u(half, 1 - a, ts[i], ctx, Exec::Serial);
    BigReal den = kummer_u(half, -a, ts[i], ctx, Exec::Serial);
    W[i] = 1 + ldexp(ts[i] * num / den, 1) / c;
  };
  if (exec == Exec::Parallel) {
    ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < 5; ++i) err.run([&] { one(i); });
    err.rethrow();
  } else {
    for (int i = 0; i < 5; ++i) one(i);
  }
  return painleve_v_residual(0, params, W[2], stencil_derivative(W, e, DerivativeOrder::First),
                             stencil_derivative(W, e, DerivativeOrder::Second),
                             tol_or_default(tolerance, ctx.bits()));
}

ResidualReport check_sigma_ode(const StencilBundle& B, const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  if (n < 1) throw DomainError("sigma ODE check needs n >= 1");
  const auto& T = B.center();
  const long bits = T.bits();
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  auto f = [n](const RecurrenceTable& x) { return x.sigma[n]; };
  const BigReal& s = T.sigma[n];
  const BigReal s1 = B.d1(f);
  const BigReal s2 = B.d2(f);

  const BigReal t2 = square(t);
  const BigReal a2 = square(a);
  const BigReal m = a + n;
  const BigReal m2 = square(m);
  const long n2 = static_cast<long>(n) * n;
  const long n3 = n2 * n;
  const long n4 = n3 * n;
  const BigReal tpa = t + a;
  const BigReal ta = t * a;

  BigReal L = square(t2) * square(s2) + ldexp(t2 * (m2 + t * (a - s1)), 1) * s2 +
              ldexp(t2 * t * square(s1) * s1, 1) -
              t2 * (square(tpa) - 3 * n * (ldexp(a, 1) + n) - 1 + ldexp(s, 2)) * square(s1) -
              ldexp(t * (3 * n4 + 12 * n3 * a + n2 * (t2 + 4 * ta + 15 * a2 + 2) +
                         2 * n * a * (t2 + 4 * ta + 3 * a2 + 2) + a * (t + ldexp(a, 1))),
                    1) * s1 +
              ldexp(t * (3 * m2 + t * (t + 4 * a)), 1) * s * s1 -
              (2 * n4 + 8 * n3 * a + 2 * n2 * (t2 + 3 * ta + 6 * a2) +
               4 * n * a * tpa * (t + ldexp(a, 1)) + ldexp(a * square(tpa) * tpa, 1)) * s +
              2 * n4 * n2 + 12 * n4 * n * a + 2 * (t2 + 3 * ta + 14 * a2 + 1) * n4 +
              8 * n3 * a * (t2 + 3 * ta + 4 * a2 + 1) +
              n2 * (ldexp(t2 * ta, 1) + (14 * a2 + 1) * t2 + ldexp(ta * (15 * a2 + 2), 1) +
                    6 * a2 * (3 * a2 + 2)) +
              n * (4 * t2 * t * a2 + ldexp(t2 * a * (6 * a2 + 1), 1) + 4 * t * a2 * (3 * a2 + 2) +
                   4 * a2 * a * (a2 + 2)) +
              ldexp(a2 * square(tpa), 1);
  BigReal k = m2 + t * (t + ldexp(a, 1));
  BigReal Q = t2 * s2 - t * (2 * n2 + 4 * n * a + 1 - ldexp(s, 1)) * s1 - k * s + n4 +
              4 * n3 * a + a * tpa + n2 * (t2 + 2 * ta + 5 * a2 + 1) +
              ldexp(n * a * (square(tpa) + 1), 1);
  BigReal rhs = ldexp(m2 * (k - ldexp(t * s1, 1)) * square(Q), 2);

  return TermSum(bits).add(square(L)).add(-rhs).report(Relation::SIGMA_ODE, n, T.params,
                                                        tol_or_default(tolerance, bits),
                                                        Normalization::LargestTerm);
}

ResidualReport check_sigma_definition(const StencilBundle& B,
                                      const std::optional<BigReal>& tolerance) {
  const int n = B.n_target;
  const auto& T = B.center();
  const long bits = T.bits();
  BigReal dlogD = B.d1([n](const RecurrenceTable& x) { return x.logD[n]; });
  return TermSum(bits)
      .add(T.sigma[n])
      .add(-(ldexp(T.t(), 1) * dlogD))
      .report(Relation::SIGMA_DEF, n, T.params, tol_or_default(tolerance, bits));
}

std::vector<ResidualReport> check_all_differential(const StencilBundle& B,
                                                   const std::optional<BigReal>& tolerance) {
  std::vector<ResidualReport> out = check_t_evolution(B, tolerance);
  auto ric = check_riccati(B, tolerance);
  out.insert(out.end(), ric.begin(), ric.end());
  if (B.n_target >= 1) {
    auto odes = check_second_order_odes(B, tolerance);
    out.insert(out.end(), odes.begin(), odes.end());
  }
  out.push_back(check_painleve_v(B, tolerance));
  if (B.n_target >= 1) out.push_back(check_sigma_ode(B, tolerance));
  out.push_back(check_sigma_definition(B, tolerance));
  return out;
}

std::vector<StepSignature> step_signature(const WeightParams& params, int n,
                                          const PrecisionContext& ctx, long coarse_exponent,
                                          Exec exec) {
  auto coarse = check_all_differential(StencilBundle::build(params, n, ctx, exec, coarse_exponent));
  auto fine = check_all_differential(StencilBundle::build(params, n, ctx, exec, coarse_exponent + 1));
  std::vector<StepSignature> out;
  const BigReal floor = ldexp(BigReal(ctx, 1), -(ctx.bits() / 2));
  for (size_t i = 0; i < coarse.size(); ++i) {
    const BigReal& c = coarse[i].relative;
    const BigReal& f = convert(fine[i].relative, c.bits());
    if (!(c > floor) || f.is_zero()) continue;  // no truncation component to measure
    double ratio = (log(c) - log(f)).to_double() / std::log(2.0);
    out.push_back({coarse[i].relation, c, f, ratio});
  }
  return out;
}

}  // namespace pjlab
