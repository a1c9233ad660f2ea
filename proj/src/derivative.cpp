#include "pjlab/derivative.hpp"

namespace pjlab {

std::array<BigReal, 5> stencil_points(const BigReal& t, long step_exponent) {
  const long bits = t.bits();
  BigReal h = ldexp(BigReal(bits, 1), -step_exponent);
  BigReal lowest = t - ldexp(h, 1);
  if (lowest <= 0)
    throw DomainError("finite-difference stencil leaves t > 0 (t - 2h = " +
                      lowest.to_string(20) + ")");
  return {lowest, t - h, t, t + h, t + ldexp(h, 1)};
}

BigReal stencil_derivative(const std::array<BigReal, 5>& v, long step_exponent,
                           DerivativeOrder order) {
  if (order == DerivativeOrder::First) {
    BigReal num = v[0] - v[4] + 8 * (v[3] - v[1]);
    return ldexp(num / 12, step_exponent);
  }
  BigReal num = 16 * (v[1] + v[3]) - (v[0] + v[4]) - 30 * v[2];
  return ldexp(num / 12, 2 * step_exponent);
}

BigReal central_derivative(const std::function<BigReal(const BigReal&)>& f, const BigReal& t,
                           DerivativeOrder order, const PrecisionContext& ctx, Exec exec) {
  if (t.bits() != ctx.bits()) throw ContextMismatch("central_derivative: t precision");
  auto pts = stencil_points(t, ctx.fd_step_exponent());
  std::array<BigReal, 5> vals{BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx)};
  ExceptionSlot slot;
  if (exec == Exec::Parallel) {
#pragma omp parallel for
    for (int i = 0; i < 5; ++i) slot.run([&] { vals[i] = f(pts[i]); });
  } else {
    for (int i = 0; i < 5; ++i) slot.run([&] { vals[i] = f(pts[i]); });
  }
  slot.rethrow();
  return stencil_derivative(vals, ctx.fd_step_exponent(), order);
}

}  // namespace pjlab
