#pragma once

// Fourth-order central finite differences in t on the five-point stencil
// t-2h, t-h, t, t+h, t+2h with h = 2^-fd_step_exponent.

#include <array>
#include <functional>

#include "pjlab/big_real.hpp"
#include "pjlab/exec.hpp"

namespace pjlab {

enum class DerivativeOrder { First = 1, Second = 2 };

/// The stencil abscissas {t-2h, t-h, t, t+h, t+2h}; throws DomainError when
/// t - 2h <= 0.
std::array<BigReal, 5> stencil_points(const BigReal& t, long step_exponent);

/// Derivative from function values at the stencil abscissas:
///   first:  (f(-2) - 8 f(-1) + 8 f(1) - f(2)) / 12h
///   second: (-f(-2) + 16 f(-1) - 30 f(0) + 16 f(1) - f(2)) / 12h^2
BigReal stencil_derivative(const std::array<BigReal, 5>& values, long step_exponent,
                           DerivativeOrder order);

/// d/dt f or d^2/dt^2 f at t. The five evaluations are independent; with
/// Exec::Parallel they run concurrently.
BigReal central_derivative(const std::function<BigReal(const BigReal&)>& f, const BigReal& t,
                           DerivativeOrder order, const PrecisionContext& ctx,
                           Exec exec = Exec::Serial);

}  // namespace pjlab
