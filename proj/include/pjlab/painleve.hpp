#pragma once

// Relations involving t-derivatives. Every derivative comes from rebuilding
// the whole table on a five-point t-stencil; no relation is used to produce
// the input of another.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "pjlab/orthopoly.hpp"
#include "pjlab/residual.hpp"

namespace pjlab {

/// Tables at t-2h, t-h, t, t+h, t+2h with h = 2^-step_exponent.
struct StencilBundle {
  WeightParams params;
  int n_target;
  long step_exponent;
  BigReal t_center;
  BigReal h;
  std::array<RecurrenceTable, 5> tables;

  /// Builds the five tables (concurrently with Exec::Parallel). The step
  /// exponent defaults to ctx.fd_step_exponent(). Tables are built through
  /// n_target + 2; if any one escalates precision, all five are rebuilt at
  /// the escalated precision so that they stay comparable.
  static StencilBundle build(const WeightParams& params, int n_target, const PrecisionContext& ctx,
                             Exec exec = Exec::Parallel,
                             std::optional<long> step_exponent = std::nullopt);

  const RecurrenceTable& center() const { return tables[2]; }
  long bits() const { return center().bits(); }

  using Field = std::function<BigReal(const RecurrenceTable&)>;
  std::array<BigReal, 5> sample(const Field& f) const;
  BigReal d1(const Field& f) const;
  BigReal d2(const Field& f) const;
};

struct PainleveVParams {
  BigReal mu1, mu2, mu3, mu4;
  static PainleveVParams for_degree(int n, const BigReal& alpha);
};

/// EQ1: 2t (ln h_n)' + R_n;  PNT: 2t p(n)' - r_n + beta_n R_n;
/// EQ2: 2t beta_n' - beta_n (R_{n-1} - R_n), only for n >= 1.
std::vector<ResidualReport> check_t_evolution(const StencilBundle& bundle,
                                              const std::optional<BigReal>& tolerance = {});

/// RIC1 and RIC2 with stencil r_n' and R_n'.
std::vector<ResidualReport> check_riccati(const StencilBundle& bundle,
                                          const std::optional<BigReal>& tolerance = {});

/// Second-order ODEs for R_n (ODE_R) and r_n (ODE_r), largest-term normalized.
std::vector<ResidualReport> check_second_order_odes(const StencilBundle& bundle,
                                                    const std::optional<BigReal>& tolerance = {});

/// Painleve V for W_n = 1 + R_n/(2n+1+2a).
ResidualReport check_painleve_v(const StencilBundle& bundle,
                                const std::optional<BigReal>& tolerance = {});

/// Painleve V at n = 0 with W_0 built from R_0 = 2t U(1/2,1-a,t)/U(1/2,-a,t)
/// on the stencil, bypassing the Hankel pipeline entirely.
ResidualReport check_painleve_v_closed_form(const WeightParams& params, const PrecisionContext& ctx,
                                            const std::optional<BigReal>& tolerance = {},
                                            Exec exec = Exec::Parallel);

/// Second-order second-degree ODE for sigma_n, largest-term normalized. n >= 1.
ResidualReport check_sigma_ode(const StencilBundle& bundle,
                               const std::optional<BigReal>& tolerance = {});

/// sigma_n against 2t (ln D_n)'.
ResidualReport check_sigma_definition(const StencilBundle& bundle,
                                      const std::optional<BigReal>& tolerance = {});

/// All of the above for the bundle's degree, skipping relations that do not
/// apply at n = 0.
std::vector<ResidualReport> check_all_differential(const StencilBundle& bundle,
                                                   const std::optional<BigReal>& tolerance = {});

/// Residuals of the derivative relations at steps 2^-e and 2^-(e+1). For a
/// coarse e, where truncation dominates rounding, log2(coarse/fine) is close
/// to 4 for a fourth-order stencil. Relations whose coarse residual is
/// already below 2^-(bits/2) (satisfied identically at this n, so there is no
/// truncation error to measure) are omitted.
struct StepSignature {
  Relation relation;
  BigReal coarse;
  BigReal fine;
  double log2_ratio;
};
std::vector<StepSignature> step_signature(const WeightParams& params, int n,
                                          const PrecisionContext& ctx, long coarse_exponent,
                                          Exec exec = Exec::Parallel);

}  // namespace pjlab
