#include "pjlab/special.hpp"

namespace pjlab {

BigReal gamma(const BigReal& x) {
  if (x <= 0) throw DomainError("gamma: argument must be positive, got " + x.to_string(20));
  BigReal r(x.bits());
  mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}

namespace {

void check_kummer_domain(const BigReal& a, const BigReal& z) {
  if (a <= 0) throw DomainError("kummer_u: a must be positive, got " + a.to_string(20));
  if (z <= 0) throw DomainError("kummer_u: z must be positive, got " + z.to_string(20));
}

}  // namespace

std::vector<BigReal> kummer_u_ladder(const BigReal& a0, const BigReal& b, const BigReal& z,
                                     std::size_t count, const PrecisionContext& ctx,
                                     Exec exec) {
  check_kummer_domain(a0, z);
  if (a0.bits() != ctx.bits() || b.bits() != ctx.bits() || z.bits() != ctx.bits())
    throw ContextMismatch("kummer_u arguments do not match the context precision");
  const BigReal a_minus_1 = a0 - 1;
  const BigReal b_minus_a_minus_1 = b - a0 - 1;
  auto integrand = [&](const Abscissa& p, std::vector<BigReal>& out) {
    const BigReal& s = p.from_lo;
    BigReal log1ps = log1p(s);
    BigReal expo = a_minus_1 * log(s) + b_minus_a_minus_1 * log1ps - z * s;
    out[0] = exp(std::move(expo));
    if (out.size() == 1) return;
    BigReal q = exp(log(s) - log1ps);  // s/(1+s) without cancellation for large s
    for (size_t j = 1; j < out.size(); ++j) out[j] = out[j - 1] * q;
  };
  QuadOptions opt;
  opt.exec = exec;
  BigReal zero(ctx);
  auto raw = tanh_sinh_integrate_batch(integrand, count, zero, positive_infinity(ctx), ctx, opt);
  BigReal g = gamma(a0);
  BigReal a = a0;
  for (size_t j = 0; j < count; ++j) {
    raw[j] /= g;
    g *= a;
    a += 1;
  }
  return raw;
}

BigReal kummer_u(const BigReal& a, const BigReal& b, const BigReal& z,
                 const PrecisionContext& ctx, Exec exec) {
  return std::move(kummer_u_ladder(a, b, z, 1, ctx, exec)[0]);
}

BigReal real_cubic_root(const BigReal& c3, const BigReal& c2, const BigReal& c0,
                        const PrecisionContext& ctx) {
  if (c3 <= 0 || c0 >= 0)
    throw DomainError("real_cubic_root: requires c3 > 0 and c0 < 0");
  const long bits = ctx.bits();
  auto poly = [&](const BigReal& u) { return (c3 * u + c2) * u * u + c0; };
  auto dpoly = [&](const BigReal& u) { return (3 * c3 * u + 2 * c2) * u; };

  // u = (-c2 + C + c2^2/C) / (3 c3),  C^3 = xi
  //   xi = -c2^3 - 27/2 c3^2 c0 + 3 sqrt(3) c3 sqrt(c0 (4 c2^3 + 27 c0 c3^2) / 4)
  // valid when the discriminant is positive (a single real root); otherwise
  // the trigonometric form picks the positive root of three.
  BigReal c2_cubed = c2 * c2 * c2;
  BigReal disc = c0 * (4 * c2_cubed + 27 * c0 * c3 * c3);
  BigReal u(ctx);
  if (disc.sign() >= 0) {
    BigReal xi = -c2_cubed - ldexp(27 * c3 * c3 * c0, -1) +
                 3 * sqrt(BigReal(ctx, 3)) * c3 * ldexp(sqrt(disc), -1);
    BigReal root = cbrt(xi);
    u = root.is_zero() ? -c2 / (3 * c3) : (root - c2 + c2 * c2 / root) / (3 * c3);
  } else {
    // Depressed cubic y^3 + P y + Q = 0 with u = y - c2/(3 c3), P < 0.
    BigReal p2 = c2 / c3;
    BigReal p0 = c0 / c3;
    BigReal P = -(p2 * p2) / 3;
    BigReal Q = ldexp(p2 * p2 * p2, 1) / 27 + p0;
    BigReal m = ldexp(sqrt(-P / 3), 1);
    BigReal arg = ldexp(3 * Q / P, -1) * sqrt(-3 / P);
    if (arg > 1) arg = BigReal(ctx, 1);
    if (arg < -1) arg = BigReal(ctx, -1);
    BigReal theta = acos(arg) / 3;
    BigReal two_pi_3 = ldexp(BigReal::pi(bits), 1) / 3;
    BigReal best(ctx, -1);
    for (int k = 0; k < 3; ++k) {
      BigReal cand = m * cos(theta - two_pi_3 * k) - p2 / 3;
      if (cand > best) best = cand;
    }
    u = best;
  }

  // Newton polishing, safeguarded by the bracket (0, 1) when it holds.
  BigReal lo(ctx, 0), hi(ctx, 1);
  for (int it = 0; it < 200; ++it) {
    BigReal f = poly(u);
    if (f.is_zero()) break;
    if (f.sign() < 0) lo = max(lo, u); else hi = u < hi ? u : hi;
    BigReal step = f / dpoly(u);
    // A converged step may round onto a bracket end, so test it first.
    if (step.is_zero() || step.exponent() < u.exponent() - bits + 2) {
      u -= step;
      break;
    }
    BigReal next = u - step;
    if (!(next > lo && next < hi) && lo < hi) next = ldexp(lo + hi, -1);
    u = std::move(next);
  }
  if (!(u > 0 && u < 1))
    throw InvariantViolation("real_cubic_root: positive root not in (0,1): " + u.to_string(20));
  return u;
}

}  // namespace pjlab
