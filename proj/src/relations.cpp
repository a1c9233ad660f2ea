#include "pjlab/relations.hpp"

#include <string>

namespace pjlab {

namespace {

BigReal tol_or_default(const std::optional<BigReal>& tol, long bits) {
  return tol ? convert(*tol, bits) : default_tolerance(bits);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// LadderRational

LadderRational::LadderRational(int n, BigReal alpha, BigReal t, BigReal R, BigReal r,
                               BigReal sum_coeff)
    : n_(n),
      alpha_(std::move(alpha)),
      t_(std::move(t)),
      R_(std::move(R)),
      r_(std::move(r)),
      sum_coeff_(std::move(sum_coeff)) {}

LadderRational LadderRational::from_table(const RecurrenceTable& table, int n) {
  require(n >= 0 && n < static_cast<int>(table.R.size()), "ladder coefficients need R_n: n out of range");
  const BigReal& a = table.alpha();
  BigReal sum_coeff = n * (ldexp(table.t(), 1) + n) - (ldexp(a, 1) + (2 * n + 1)) * table.beta[n] +
                      ldexp((a + n) * table.p[n], 2);
  return LadderRational(n, a, table.t(), table.R[n], table.r[n], std::move(sum_coeff));
}

BigReal LadderRational::one_minus_z2(const BigReal& z) const {
  if (!(abs(z) < 1)) throw DomainError("ladder functions are evaluated only for |z| < 1");
  return (1 - z) * (z + 1);
}

BigReal LadderRational::A(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  return (ldexp(alpha_, 1) + (2 * n_ + 1)) / s + R_ / square(s);
}

BigReal LadderRational::dA(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  return ldexp((ldexp(alpha_, 1) + (2 * n_ + 1)) * z, 1) / square(s) +
         ldexp(R_ * z, 2) / (square(s) * s);
}

BigReal LadderRational::B(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  return n_ * z / s + z * r_ / square(s);
}

BigReal LadderRational::dB(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  BigReal s2 = square(s);
  BigReal z2 = square(z);
  return BigReal(z.bits(), n_) / s + ldexp(n_ * z2, 1) / s2 + r_ / s2 + ldexp(r_ * z2, 2) / (s2 * s);
}

BigReal LadderRational::dv(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  return ldexp(alpha_ * z, 1) / s + ldexp(t_ * z, 1) / square(s);
}

BigReal LadderRational::sum_A(const BigReal& z) const {
  BigReal s = one_minus_z2(z);
  return n_ * (ldexp(alpha_, 1) + n_) / s + sum_coeff_ / square(s);
}

// ---------------------------------------------------------------------------
// compatibility conditions

std::vector<ResidualReport> check_compatibility(const RecurrenceTable& T, int n,
                                                const std::optional<BigReal>& tolerance) {
  require(n >= 0 && n + 2 <= T.n_max, "check_compatibility: need 0 <= n <= n_max - 2");
  const long bits = T.bits();
  const BigReal tol = tol_or_default(tolerance, bits);
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  const BigReal two_t = ldexp(t, 1);
  const BigReal two_a = ldexp(a, 1);
  const auto& beta = T.beta;
  const auto& R = T.R;
  const auto& r = T.r;
  std::vector<ResidualReport> out;

  // r_{n+1} + r_n = R_n - 2t
  out.push_back(TermSum(bits).add(r[n + 1]).add(r[n]).add(-R[n]).add(two_t)
                    .report(Relation::S1, n, T.params, tol));
  if (n >= 1) {
    // r_{n+1} - r_n = beta_{n+1} R_{n+1} - beta_n R_{n-1}
    out.push_back(TermSum(bits)
                      .add(r[n + 1]).add(-r[n]).add(-(beta[n + 1] * R[n + 1])).add(beta[n] * R[n - 1])
                      .report(Relation::S21, n, T.params, tol));
  }
  // r_{n+1} - r_n - 1 = (2n-1+2a) beta_n - (2n+3+2a) beta_{n+1}
  out.push_back(TermSum(bits)
                    .add(r[n + 1]).add(-r[n]).add(BigReal(bits, -1))
                    .add(-((two_a + (2 * n - 1)) * beta[n]))
                    .add((two_a + (2 * n + 3)) * beta[n + 1])
                    .report(Relation::S22, n, T.params, tol));
  if (n >= 1) {
    // r_n^2 + 2t r_n = beta_n R_n R_{n-1}
    out.push_back(TermSum(bits)
                      .add(square(r[n])).add(two_t * r[n]).add(-(beta[n] * R[n] * R[n - 1]))
                      .report(Relation::S2P1, n, T.params, tol));
    // r_n^2 + 2(t-n-a) r_n - 2nt + (2n+1+2a) beta_n R_{n-1} + (2n-1+2a) beta_n R_n = 0
    out.push_back(TermSum(bits)
                      .add(square(r[n]))
                      .add(ldexp((t - a - n) * r[n], 1))
                      .add(-(two_t * n))
                      .add((two_a + (2 * n + 1)) * beta[n] * R[n - 1])
                      .add((two_a + (2 * n - 1)) * beta[n] * R[n])
                      .report(Relation::S2P2, n, T.params, tol));
  }
  // n(n+2a-2t) - 2(n+a) r_n + sum_{j<n} R_j = (2n+1+2a)(2n-1+2a) beta_n
  BigReal sumR(bits);
  for (int j = 0; j < n; ++j) sumR += R[j];
  out.push_back(TermSum(bits)
                    .add(n * (two_a - two_t + n))
                    .add(-(ldexp((a + n) * r[n], 1)))
                    .add(sumR)
                    .add(-((two_a + (2 * n + 1)) * (two_a + (2 * n - 1)) * beta[n]))
                    .report(Relation::S2P3, n, T.params, tol));
  return out;
}

// ---------------------------------------------------------------------------
// difference equations

ResidualReport residual_beta_difference(const RecurrenceTable& T, int n,
                                        const std::optional<BigReal>& tolerance) {
  require(n >= 1 && n <= T.n_max - 1, "residual_beta_difference: need 1 <= n <= n_max - 1");
  const long bits = T.bits();
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  const BigReal two_a = ldexp(a, 1);
  const BigReal& b = T.beta[n];
  const BigReal bm = (two_a + (2 * n - 3)) * T.beta[n - 1];  // tilde beta_{n-1}
  const BigReal bp = (two_a + (2 * n + 3)) * T.beta[n + 1];  // tilde beta_{n+1}
  const BigReal m = a + n;
  const BigReal m2 = square(m);
  const BigReal cm = two_a + (2 * n - 1);  // 2n-1+2a
  const BigReal cp = two_a + (2 * n + 1);  // 2n+1+2a
  const BigReal b2 = square(b);
  const BigReal t_t2a = t * (t - two_a);

  BigReal lhs = (68 * m2 - 9) * b2 * b +
                (12 - 80 * m2 + (14 * a + (14 * n + 5)) * bm + (14 * a + (14 * n - 5)) * bp) * b2 +
                (24 * m2 + 4 * t_t2a - 3 - ldexp(cp * bm, 1) - ldexp(cm * bp, 1) + bm * bp) * b -
                ldexp(m2 - t * a, 1);
  BigReal q1 = ldexp(cm * cp * b2, 1) + (cp * bm + cm * bp - ldexp(cm * cp, 1)) * b + m2 + t_t2a;
  BigReal q2 = 12 * m * b2 + (bm + bp - 8 * m) * b + m;
  BigReal rhs = ldexp(q1 * square(q2), 2);
  return TermSum(bits).add(square(lhs)).add(-rhs).report(Relation::BTD, n, T.params,
                                                          tol_or_default(tolerance, bits));
}

ResidualReport residual_p_difference(const RecurrenceTable& T, int n,
                                     const std::optional<BigReal>& tolerance) {
  require(n >= 1 && n <= T.n_max - 1, "residual_p_difference: need 1 <= n <= n_max - 1");
  const long bits = T.bits();
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  const BigReal two_a = ldexp(a, 1);
  const BigReal& p = T.p[n];
  const BigReal pm = (two_a + (2 * n - 3)) * (T.p[n - 1] - p);  // tilde p(n-1)
  const BigReal pp = (two_a + (2 * n + 1)) * (p - T.p[n + 1]);  // tilde p(n+1)
  const BigReal X = n + ldexp(p, 1) - pp;
  const BigReal X2 = square(X);
  const BigReal two_t = ldexp(t, 1);
  const BigReal y = two_t + (n - 1) - pm;  // n-1+2t - tilde p(n-1)
  const BigReal w = a + n - t - pp;        // n+a-t - tilde p(n+1)
  const BigReal nt2 = two_t * n;           // 2nt

  TermSum s(bits);
  s.add(X2 * X);
  s.add(X2 * (ldexp(t, 2) + (n - 2) - pm + pp));
  s.add(-ldexp(X, 1) * (BigReal(bits, n * n) - n * (1 - a) - a + two_t - ldexp(square(t), 1) -
                        pm * w - (two_t + (n - 1)) * pp));
  s.add(-y * (nt2 - pp * y));
  s.add(ldexp(square(p) * pp, 2));
  s.add(ldexp(p, 1) * (X2 + ldexp(pp * y, 1) - ldexp(X * w, 1) - nt2));
  return s.report(Relation::PND, n, T.params, tol_or_default(tolerance, bits));
}

ResidualReport residual_sigma_difference(const RecurrenceTable& T, int n,
                                         const std::optional<BigReal>& tolerance) {
  require(n >= 1 && n <= T.n_max - 1, "residual_sigma_difference: need 1 <= n <= n_max - 1");
  const long bits = T.bits();
  const BigReal& a = T.alpha();
  const BigReal& t = T.t();
  const BigReal two_a = ldexp(a, 1);
  const BigReal& s = T.sigma[n];
  const BigReal& sm = T.sigma[n - 1];
  const BigReal& sp = T.sigma[n + 1];
  const BigReal cm = two_a + (2 * n - 1);
  const BigReal cp = two_a + (2 * n + 1);

  BigReal f = cp * sm - cm * sp - sm * sp - square(s) + s * (sm + sp - 2);
  BigReal g = (cm + sm - s) * (cp + s - sp);
  BigReal K = (n * (two_a - ldexp(t, 1) + n) - s) * f - ldexp(t * n, 1) * cm * cp;
  const BigReal m = a + n;

  TermSum sum(bits);
  sum.add(square(K));
  sum.add(ldexp(t * m * g * K, 2));
  sum.add(-ldexp(square(m) * (sm - s) * (s - sp) * (n * (two_a + n) - s) * g, 2));
  return sum.report(Relation::SND, n, T.params, tol_or_default(tolerance, bits));
}

// ---------------------------------------------------------------------------
// differential relations in z

std::vector<ResidualReport> check_polynomial_ode(const RecurrenceTable& T, int n,
                                                 const std::vector<BigReal>& z_samples,
                                                 const std::optional<BigReal>& tolerance) {
  require(n >= 1, "check_polynomial_ode: n = 0 is excluded");
  const long bits = T.bits();
  const BigReal tol = tol_or_default(tolerance, bits);
  auto ladder = LadderRational::from_table(T, n);
  auto poly = polynomial_coeffs(T, n);
  std::vector<ResidualReport> out;
  for (const auto& z_in : z_samples) {
    BigReal z = convert(z_in, bits);
    auto P = poly.evaluate(z);
    BigReal A = ladder.A(z);
    BigReal ratio = ladder.dA(z) / A;
    BigReal B = ladder.B(z);
    TermSum s(bits);
    s.add(P.d2);
    s.add(-(ladder.dv(z) * P.d1));
    s.add(-(ratio * P.d1));
    s.add(ladder.dB(z) * P.value);
    s.add(-(B * ratio * P.value));
    s.add(ladder.sum_A(z) * P.value);
    auto rep = s.report(Relation::POLY_ODE, n, T.params, tol, Normalization::LargestTerm);
    rep.z = std::move(z);
    out.push_back(std::move(rep));
  }
  return out;
}

ResidualReport check_lowering(const RecurrenceTable& T, int n, const BigReal& z_in,
                              const std::optional<BigReal>& tolerance) {
  require(n >= 1 && n <= T.n_max - 1, "check_lowering: need 1 <= n <= n_max - 1");
  const long bits = T.bits();
  BigReal z = convert(z_in, bits);
  auto ladder = LadderRational::from_table(T, n);
  auto Pn = polynomial_coeffs(T, n).evaluate(z);
  auto Pm = polynomial_coeffs(T, n - 1).evaluate(z);
  TermSum s(bits);
  s.add(Pn.d1);
  s.add(ladder.B(z) * Pn.value);
  s.add(-(T.beta[n] * ladder.A(z) * Pm.value));
  auto rep = s.report(Relation::LOWERING, n, T.params, tol_or_default(tolerance, bits));
  rep.z = std::move(z);
  return rep;
}

}  // namespace pjlab
