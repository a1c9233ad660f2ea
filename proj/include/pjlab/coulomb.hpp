#pragma once

// Coulomb-fluid picture at continuous particle number n: the equilibrium
// density on the symmetric support (-b, b), its Lagrange multiplier A and the
// free energy F[sigma].

#include <optional>
#include <vector>

#include "pjlab/orthopoly.hpp"
#include "pjlab/quadrature.hpp"

namespace pjlab {

struct EquilibriumMeasure {
  WeightParams params;
  BigReal n;
  BigReal u;  // sqrt(1 - b^2), root of 2(n+a)u^3 + (t-2a)u^2 - t
  BigReal b;
  BigReal A;
  /// The closed-form discriminant combination of the cubic; empty when its
  /// square root argument is negative (the closed form then needs complex
  /// arithmetic and the root came from the trigonometric branch).
  std::optional<BigReal> xi;

  long bits() const { return u.bits(); }
};

/// u from the cubic, b = sqrt(1-u^2),
/// A = t/u - 2n ln(b/2) + 2a ln(2/(1+u)).
EquilibriumMeasure solve_support(const WeightParams& params, const BigReal& n,
                                 const PrecisionContext& ctx);

/// The cubic's closed-form root (no polishing), for comparison.
BigReal closed_form_u(const WeightParams& params, const BigReal& n, const PrecisionContext& ctx);

/// v(x) = t/(1-x^2) - a ln(1-x^2)
BigReal potential(const WeightParams& params, const BigReal& x);

/// sqrt(b^2-x^2) [2t - b^2 t (1+x^2) + 2a u^2 (1-x^2)] / (2 pi u^3 (1-x^2)^2);
/// DomainError for |x| > b.
BigReal density(const EquilibriumMeasure& m, const BigReal& x);

/// Integral of the density over the support; should equal n.
BigReal total_mass(const EquilibriumMeasure& m, const PrecisionContext& ctx,
                   Exec exec = Exec::Parallel);

/// U(x) = int ln|x-y| sigma(y) dy, split at y = x. |x| < b.
BigReal log_potential(const EquilibriumMeasure& m, const BigReal& x, const PrecisionContext& ctx,
                      const QuadOptions& opt = {});

struct EquilibriumDeviation {
  BigReal x;
  BigReal value;     // v(x) - 2 U(x)
  BigReal relative;  // |value - A| / |A|
};

/// v(x) - 2U(x) against A at each sample; samples must lie in (-b, b).
std::vector<EquilibriumDeviation> check_equilibrium(const EquilibriumMeasure& m,
                                                    const std::vector<BigReal>& x_samples,
                                                    const PrecisionContext& ctx,
                                                    Exec exec = Exec::Parallel);

/// F = int sigma v - int int sigma(x) ln|x-y| sigma(y) by nested quadrature.
/// `tolerance_bits` relaxes the level-agreement target of both layers.
BigReal free_energy(const EquilibriumMeasure& m, const PrecisionContext& ctx,
                    std::optional<long> tolerance_bits = std::nullopt, Exec exec = Exec::Parallel);

/// dF/dn from the five-point stencil in n with step 2^-step_exponent, each
/// point a fresh support solve and free-energy evaluation.
BigReal free_energy_n_derivative(const WeightParams& params, const BigReal& n,
                                 const PrecisionContext& ctx, long step_exponent = 6,
                                 std::optional<long> tolerance_bits = std::nullopt,
                                 Exec exec = Exec::Parallel);

}  // namespace pjlab
