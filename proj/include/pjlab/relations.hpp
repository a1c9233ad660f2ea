#pragma once

// Residuals of the t-fixed relations: ladder compatibility consequences, the
// second-order difference equations for beta_n, p(n,t) and sigma_n, and the
// polynomial ODE / lowering relation at sample points z in (-1, 1).

#include <optional>
#include <vector>

#include "pjlab/orthopoly.hpp"
#include "pjlab/residual.hpp"

namespace pjlab {

/// A_n(z) = (2n+1+2a)/(1-z^2) + R_n/(1-z^2)^2
/// B_n(z) = n z/(1-z^2) + z r_n/(1-z^2)^2
/// v'(z)  = 2a z/(1-z^2) + 2t z/(1-z^2)^2
/// sum_{j<n} A_j(z) = (n^2+2na)/(1-z^2)
///                    + [n(n+2t) - (2n+1+2a) beta_n + 4(n+a) p(n)]/(1-z^2)^2
/// Derivatives are the hand-differentiated closed forms. Poles at z = +-1.
class LadderRational {
 public:
  static LadderRational from_table(const RecurrenceTable& table, int n);

  int n() const { return n_; }
  BigReal A(const BigReal& z) const;
  BigReal dA(const BigReal& z) const;
  BigReal B(const BigReal& z) const;
  BigReal dB(const BigReal& z) const;
  BigReal dv(const BigReal& z) const;
  BigReal sum_A(const BigReal& z) const;

 private:
  LadderRational(int n, BigReal alpha, BigReal t, BigReal R, BigReal r, BigReal sum_coeff);
  BigReal one_minus_z2(const BigReal& z) const;

  int n_;
  BigReal alpha_, t_, R_, r_, sum_coeff_;
};

/// (s1), (s21), (s22), (s2p1), (s2p2), (s2p3) at degree n; the three that
/// involve index n-1 are omitted at n = 0. Requires n <= n_max - 2.
std::vector<ResidualReport> check_compatibility(const RecurrenceTable& table, int n,
                                                const std::optional<BigReal>& tolerance = {});

/// Squared-form difference equation for beta_n, residual = LHS^2 - RHS.
ResidualReport residual_beta_difference(const RecurrenceTable& table, int n,
                                        const std::optional<BigReal>& tolerance = {});
/// Difference equation for p(n,t).
ResidualReport residual_p_difference(const RecurrenceTable& table, int n,
                                     const std::optional<BigReal>& tolerance = {});
/// Difference equation for sigma_n with its helper functions f and g.
ResidualReport residual_sigma_difference(const RecurrenceTable& table, int n,
                                         const std::optional<BigReal>& tolerance = {});

/// P_n'' - (v' + A_n'/A_n) P_n' + (B_n' - B_n A_n'/A_n + sum_{j<n} A_j) P_n at
/// each z, normalized by the largest term. n >= 1.
std::vector<ResidualReport> check_polynomial_ode(const RecurrenceTable& table, int n,
                                                 const std::vector<BigReal>& z_samples,
                                                 const std::optional<BigReal>& tolerance = {});

/// (d/dz + B_n) P_n - beta_n A_n P_{n-1} at z. 1 <= n <= n_max - 1.
ResidualReport check_lowering(const RecurrenceTable& table, int n, const BigReal& z,
                              const std::optional<BigReal>& tolerance = {});

}  // namespace pjlab
