#include "oracles.hpp"

#include <cmath>

namespace oracle {

using pjlab::PrecisionContext;

namespace {

BigReal gamma_any(const BigReal& x) {
  BigReal r(x.bits());
  mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// 1F1(a; b; z) by its power series; z > 0 so all terms of large index share
// a sign and the sum is stable.
BigReal m_series(const BigReal& a, const BigReal& b, const BigReal& z) {
  const long bits = z.bits();
  BigReal term(bits, 1), sum(bits, 1);
  BigReal floor_ = pjlab::ldexp(BigReal(bits, 1), -bits - 8);
  for (long k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (k > 4 && pjlab::abs(term) < floor_ * pjlab::abs(sum)) break;
  }
  return sum;
}

BigReal u_connection(const BigReal& a, const BigReal& b, const BigReal& z) {
  BigReal first = gamma_any(1 - b) / gamma_any(a - b + 1) * m_series(a, b, z);
  BigReal second = gamma_any(b - 1) / gamma_any(a) * pjlab::pow(z, 1 - b) *
                   m_series(a - b + 1, 2 - b, z);
  return first + second;
}

}  // namespace

BigReal kummer_u_series(const BigReal& a, const BigReal& b, const BigReal& z) {
  const long bits = a.bits();
  const long wide = 2 * bits + 64;
  BigReal aw = pjlab::convert(a, wide), bw = pjlab::convert(b, wide), zw = pjlab::convert(z, wide);
  BigReal eps = pjlab::ldexp(BigReal(wide, 1), -(bits / 2 + 16));
  BigReal v = pjlab::ldexp(u_connection(aw, bw + eps, zw) + u_connection(aw, bw - eps, zw), -1);
  return pjlab::convert(v, bits);
}

BigReal bareiss_det(std::vector<std::vector<BigReal>> m) {
  const size_t n = m.size();
  if (n == 0) return BigReal(128, 1);
  const long bits = m[0][0].bits();
  BigReal prev(bits, 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return m[n - 1][n - 1];
}

BigReal beta_from_determinants(const pjlab::WeightParams& params, int n, long bits) {
  const long wide = 2 * bits;
  PrecisionContext ctx(wide);
  auto wp = params.at_precision(wide);
  auto mu = pjlab::quadrature_moments(wp, 2 * n + 2, ctx, pjlab::Exec::Serial);
  auto det = [&](int size) {
    std::vector<std::vector<BigReal>> h(size, std::vector<BigReal>(size, BigReal(wide)));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) h[i][j] = mu[i + j];
    return size == 0 ? BigReal(wide, 1) : bareiss_det(std::move(h));
  };
  BigReal dn = det(n);
  return pjlab::convert(det(n + 1) * det(n - 1) / (dn * dn), bits);
}

BigReal bisect(const std::function<BigReal(const BigReal&)>& f, BigReal lo, BigReal hi) {
  const int s_lo = f(lo).sign();
  for (long it = 0; it < lo.bits() + 8; ++it) {
    BigReal mid = pjlab::ldexp(lo + hi, -1);
    if (mid == lo || mid == hi) break;
    (f(mid).sign() == s_lo ? lo : hi) = mid;
  }
  return pjlab::ldexp(lo + hi, -1);
}

double log2_abs(const BigReal& a) {
  long e = 0;
  double m = mpfr_get_d_2exp(&e, a.get(), MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

}  // namespace oracle
