#pragma once

// Monic orthogonal polynomials for w(x,t) = (1-x^2)^alpha exp(-t/(1-x^2)) on
// [-1,1]: moments, Hankel factorization and the per-degree quantities
// h_n, ln D_n, beta_n, p(n,t), R_n, r_n, sigma_n.

#include <string>
#include <vector>
#include <optional>

#include "pjlab/big_real.hpp"
#include "pjlab/exec.hpp"

namespace pjlab {

/// (alpha, t), both strictly positive. When built from decimal text the text
/// is kept so the parameters can be re-read exactly at another precision.
class WeightParams {
 public:
  WeightParams(BigReal alpha, BigReal t);
  static WeightParams parse(const PrecisionContext& ctx, std::string_view alpha,
                            std::string_view t);

  const BigReal& alpha() const { return alpha_; }
  const BigReal& t() const { return t_; }
  long bits() const { return alpha_.bits(); }
  const std::string& alpha_text() const { return alpha_text_; }
  const std::string& t_text() const { return t_text_; }

  WeightParams at_precision(long bits) const;
  /// Same alpha, different t (stencil runs).
  WeightParams with_t(BigReal t) const;
  /// alpha - 1 (may be non-positive; only used for the moment derivative identity).
  WeightParams shifted_alpha_unchecked(long delta) const;

  /// ln w(x,t) for |x| < 1, given 1 - x^2.
  BigReal log_weight(const BigReal& one_minus_x2) const;

 private:
  WeightParams(BigReal alpha, BigReal t, bool check);
  BigReal alpha_;
  BigReal t_;
  std::string alpha_text_;
  std::string t_text_;
};

struct MomentTable {
  WeightParams params;
  int k_max;
  /// mu[k] for k = 0..k_max; odd entries are exact zeros.
  std::vector<BigReal> mu;
  /// Moments of the weight with alpha - 1, when requested:
  /// d/dt mu_k(t; alpha) = -mu_k(t; alpha - 1).
  std::optional<std::vector<BigReal>> mu_alpha_minus_one;
};

/// mu_k = e^-t Gamma((k+1)/2) U((k+1)/2, -alpha, t) for even k.
MomentTable build_moments(const WeightParams& params, int k_max, const PrecisionContext& ctx,
                          bool with_alpha_minus_one = false, Exec exec = Exec::Parallel);

/// The same moments by direct tanh-sinh quadrature of x^k w(x,t) on [-1,1].
std::vector<BigReal> quadrature_moments(const WeightParams& params, int k_max,
                                        const PrecisionContext& ctx,
                                        Exec exec = Exec::Parallel);

/// Per-degree quantities at one parameter point. Index ranges:
///   h, beta, r, sigma: 0..n_max      logD, p: 0..n_max+1      R: 0..n_max-1
struct RecurrenceTable {
  WeightParams params;
  PrecisionContext ctx;
  int n_max;
  std::vector<BigReal> h;
  std::vector<BigReal> logD;
  std::vector<BigReal> beta;
  std::vector<BigReal> p;
  std::vector<BigReal> R;
  std::vector<BigReal> r;
  std::vector<BigReal> sigma;

  const BigReal& alpha() const { return params.alpha(); }
  const BigReal& t() const { return params.t(); }
  long bits() const { return ctx.bits(); }
};

/// Root-free LDL^T factorization of the Hankel matrix (mu_{i+j})_{i,j<=n_max};
/// fills h, logD, beta, p. A non-positive pivot raises PrecisionExhausted.
RecurrenceTable factor_hankel(const MomentTable& moments, int n_max, const PrecisionContext& ctx,
                              Exec exec = Exec::Parallel);

/// r_n = n - (2n+1+2a) beta_n + 2 p(n)
/// R_n = 2n+1+2t - (2n+3+2a)(beta_n + beta_{n+1}) + 4 p(n)
void ladder_quantities(RecurrenceTable& table);

/// sigma_n = -n(n+2t) - (2n-1+2a) p(n) - (2n+1+2a) p(n+1)
void sigma_values(RecurrenceTable& table);

/// Moments, factorization, ladder quantities and sigma in one call. A
/// PrecisionExhausted failure is retried at doubled precision up to
/// `escalations` times; the table records the precision actually used.
RecurrenceTable build_table(const WeightParams& params, int n_max, const PrecisionContext& ctx,
                            Exec exec = Exec::Parallel, int escalations = 2);

/// Monic coefficients of P_n, coeffs[k] multiplies x^k.
struct PolyCoeffs {
  int n;
  std::vector<BigReal> coeffs;

  /// P, P', P'' at z by Horner's rule.
  struct Jet {
    BigReal value, d1, d2;
  };
  Jet evaluate(const BigReal& z) const;
};

/// P_n from P_{k+1} = x P_k - beta_k P_{k-1}, P_0 = 1, P_{-1} = 0.
PolyCoeffs polynomial_coeffs(const RecurrenceTable& table, int n);

}  // namespace pjlab
