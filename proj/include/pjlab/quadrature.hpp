#pragma once

// Double-exponential quadrature at arbitrary precision.
//
//   [a, b]        tanh-sinh      x = c + d tanh(pi/2 sinh s)
//   [a, +inf)     exp-sinh       x = a + exp(s - exp(-s))
//   (-inf, b]     mirrored exp-sinh
//   (-inf, +inf)  sinh-sinh      x = sinh(pi/2 sinh s)
//
// The step is halved level by level (reusing previous nodes) until two
// successive levels agree; since the error squares when the step halves, the
// stopping rule compares against ~0.6 * bits so the returned value carries
// close to full working precision.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pjlab/big_real.hpp"
#include "pjlab/exec.hpp"

namespace pjlab {

/// A quadrature abscissa with its distances to both ends of the interval,
/// computed without cancellation (so integrands can form e.g. 1 - x^2 or
/// ln|x - y| accurately near an endpoint). Distances to infinite ends are inf.
struct Abscissa {
  const BigReal& x;
  const BigReal& from_lo;
  const BigReal& from_hi;
};

using Integrand = std::function<BigReal(const Abscissa&)>;
/// Vector-valued integrand; writes `count` components into `out`.
using BatchIntegrand = std::function<void(const Abscissa&, std::vector<BigReal>& out)>;

struct QuadOptions {
  /// Successive-level agreement target, as a power of two. Defaults to
  /// ceil(0.6 * bits).
  std::optional<long> tolerance_bits;
  /// Overrides the context's quad_level.
  std::optional<int> max_level;
  Exec exec = Exec::Parallel;
};

struct QuadStats {
  int level = 0;
  std::size_t evaluations = 0;
};

/// Integral of f over (lo, hi); lo/hi may be +-inf. Throws PrecisionExhausted
/// when the levels do not agree by quad_level, DomainError if lo >= hi.
BigReal tanh_sinh_integrate(const Integrand& f, const BigReal& lo, const BigReal& hi,
                            const PrecisionContext& ctx, const QuadOptions& opt = {},
                            QuadStats* stats = nullptr);

/// Several integrals over the same interval sharing abscissas; each component
/// must converge separately.
std::vector<BigReal> tanh_sinh_integrate_batch(const BatchIntegrand& f, std::size_t count,
                                               const BigReal& lo, const BigReal& hi,
                                               const PrecisionContext& ctx,
                                               const QuadOptions& opt = {},
                                               QuadStats* stats = nullptr);

BigReal positive_infinity(const PrecisionContext& ctx);
BigReal negative_infinity(const PrecisionContext& ctx);

}  // namespace pjlab
