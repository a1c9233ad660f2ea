#include "pjlab/coulomb.hpp"

#include "pjlab/derivative.hpp"
#include "pjlab/special.hpp"

namespace pjlab {

namespace {

// sigma(x) with b-x and b+x supplied separately so that points next to the
// support edges keep their relative accuracy.
BigReal density_from_gaps(const EquilibriumMeasure& m, const BigReal& x, const BigReal& b_minus_x,
                          const BigReal& b_plus_x) {
  const BigReal& t = m.params.t();
  const BigReal& a = m.params.alpha();
  BigReal x2 = square(x);
  BigReal one_minus_x2 = (1 - x) * (x + 1);
  BigReal b2 = square(m.b);
  BigReal bracket = ldexp(t, 1) - b2 * t * (1 + x2) + ldexp(a * square(m.u) * one_minus_x2, 1);
  BigReal den = ldexp(BigReal::pi(x.bits()) * square(m.u) * m.u * square(one_minus_x2), 1);
  return sqrt(b_minus_x * b_plus_x) * bracket / den;
}

}  // namespace

BigReal closed_form_u(const WeightParams& params_in, const BigReal& n_in,
                      const PrecisionContext& ctx) {
  WeightParams params = params_in.at_precision(ctx.bits());
  BigReal n = convert(n_in, ctx.bits());
  const BigReal& a = params.alpha();
  const BigReal& t = params.t();
  BigReal m = n + a;
  BigReal rad = 3 * t * (27 * n * (n + ldexp(a, 1)) * t - (t - 8 * a) * square(t + a));
  if (rad.sign() < 0) throw DomainError("closed-form cubic root needs a non-negative radicand");
  BigReal xi = 8 * square(a) * a + 6 * t * (9 * square(n) + 18 * n * a + 7 * square(a)) +
               6 * square(t) * a - square(t) * t + 6 * m * sqrt(rad);
  BigReal c = cbrt(xi);
  BigReal k = ldexp(a, 1) - t;
  return (k + c + square(k) / c) / (6 * m);
}

EquilibriumMeasure solve_support(const WeightParams& params_in, const BigReal& n_in,
                                 const PrecisionContext& ctx) {
  WeightParams params = params_in.at_precision(ctx.bits());
  BigReal n = convert(n_in, ctx.bits());
  if (!(n > 0)) throw DomainError("particle number must be positive");
  const BigReal& a = params.alpha();
  const BigReal& t = params.t();
  BigReal u = real_cubic_root(ldexp(n + a, 1), t - ldexp(a, 1), -t, ctx);
  BigReal b = sqrt((1 - u) * (u + 1));
  BigReal A = t / u - ldexp(n * log(ldexp(b, -1)), 1) + ldexp(a * log(2 / (1 + u)), 1);

  std::optional<BigReal> xi;
  BigReal rad = 3 * t * (27 * n * (n + ldexp(a, 1)) * t - (t - 8 * a) * square(t + a));
  if (rad.sign() >= 0)
    xi = 8 * square(a) * a + 6 * t * (9 * square(n) + 18 * n * a + 7 * square(a)) +
         6 * square(t) * a - square(t) * t + 6 * (n + a) * sqrt(rad);
  return {std::move(params), std::move(n), std::move(u), std::move(b), std::move(A), std::move(xi)};
}

BigReal potential(const WeightParams& params, const BigReal& x) {
  BigReal s = (1 - x) * (x + 1);
  return params.t() / s - params.alpha() * log(s);
}

BigReal density(const EquilibriumMeasure& m, const BigReal& x) {
  if (abs(x) > m.b) throw DomainError("density evaluated outside the support");
  return density_from_gaps(m, x, m.b - x, m.b + x);
}

BigReal total_mass(const EquilibriumMeasure& m, const PrecisionContext& ctx, Exec exec) {
  QuadOptions opt;
  opt.exec = exec;
  BigReal lo = -convert(m.b, ctx.bits());
  BigReal hi = convert(m.b, ctx.bits());
  return tanh_sinh_integrate(
      [&](const Abscissa& p) { return density_from_gaps(m, p.x, p.from_hi, p.from_lo); }, lo, hi,
      ctx, opt);
}

namespace {

// Outer quadrature nodes may round onto +-b; the gaps keep their distance.
BigReal log_potential_gaps(const EquilibriumMeasure& m, const BigReal& x, const BigReal& b_minus_x,
                           const BigReal& b_plus_x, const PrecisionContext& ctx,
                           const QuadOptions& opt) {
  const BigReal& b = m.b;
  // y in (-b, x): |x - y| is the gap to the upper end, b - y = (b - x) + gap.
  BigReal left = tanh_sinh_integrate(
      [&](const Abscissa& p) {
        return log(p.from_hi) * density_from_gaps(m, p.x, b_minus_x + p.from_hi, p.from_lo);
      },
      -b, x, ctx, opt);
  // y in (x, b): |x - y| is the gap to the lower end, b + y = (b + x) + gap.
  BigReal right = tanh_sinh_integrate(
      [&](const Abscissa& p) {
        return log(p.from_lo) * density_from_gaps(m, p.x, p.from_hi, b_plus_x + p.from_lo);
      },
      x, b, ctx, opt);
  return left + right;
}

}  // namespace

BigReal log_potential(const EquilibriumMeasure& m, const BigReal& x, const PrecisionContext& ctx,
                      const QuadOptions& opt) {
  if (!(abs(x) < m.b)) throw DomainError("log potential needs |x| < b");
  return log_potential_gaps(m, x, m.b - x, m.b + x, ctx, opt);
}

std::vector<EquilibriumDeviation> check_equilibrium(const EquilibriumMeasure& m,
                                                    const std::vector<BigReal>& x_samples,
                                                    const PrecisionContext& ctx, Exec exec) {
  QuadOptions opt;
  opt.exec = exec;
  std::vector<EquilibriumDeviation> out;
  for (const auto& xs : x_samples) {
    BigReal x = convert(xs, ctx.bits());
    BigReal value = potential(m.params, x) - ldexp(log_potential(m, x, ctx, opt), 1);
    BigReal rel = abs(value - m.A) / abs(m.A);
    out.push_back({std::move(x), std::move(value), std::move(rel)});
  }
  return out;
}

BigReal free_energy(const EquilibriumMeasure& m, const PrecisionContext& ctx,
                    std::optional<long> tolerance_bits, Exec exec) {
  QuadOptions inner;
  inner.exec = Exec::Serial;  // the outer layer owns the threads
  inner.tolerance_bits = tolerance_bits;
  QuadOptions outer;
  outer.exec = exec;
  outer.tolerance_bits = tolerance_bits;
  BigReal lo = -m.b;
  return tanh_sinh_integrate(
      [&](const Abscissa& p) {
        BigReal s = density_from_gaps(m, p.x, p.from_hi, p.from_lo);
        if (s.is_zero()) return s;
        return s * (potential(m.params, p.x) - log_potential_gaps(m, p.x, p.from_hi, p.from_lo, ctx, inner));
      },
      lo, m.b, ctx, outer);
}

BigReal free_energy_n_derivative(const WeightParams& params, const BigReal& n_in,
                                 const PrecisionContext& ctx, long step_exponent,
                                 std::optional<long> tolerance_bits, Exec exec) {
  BigReal n = convert(n_in, ctx.bits());
  auto ns = stencil_points(n, step_exponent);
  std::array<BigReal, 5> F{BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx), BigReal(ctx)};
  for (int i = 0; i < 5; ++i)
    F[i] = free_energy(solve_support(params, ns[i], ctx), ctx, tolerance_bits, exec);
  return stencil_derivative(F, step_exponent, DerivativeOrder::First);
}

}  // namespace pjlab
