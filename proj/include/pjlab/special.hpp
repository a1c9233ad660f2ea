#pragma once

#include <cstddef>
#include <vector>

#include "pjlab/big_real.hpp"
#include "pjlab/quadrature.hpp"

namespace pjlab {

/// Gamma function for x > 0.
BigReal gamma(const BigReal& x);

/// Kummer's function of the second kind U(a, b, z) for a > 0, z > 0, from
///   U(a,b,z) = 1/Gamma(a) * int_0^inf e^{-zs} s^{a-1} (1+s)^{b-a-1} ds
/// with the half-line double-exponential map.
BigReal kummer_u(const BigReal& a, const BigReal& b, const BigReal& z,
                 const PrecisionContext& ctx, Exec exec = Exec::Parallel);

/// U(a0 + j, b, z) for j = 0 .. count-1 from one shared set of abscissas:
/// the integrands differ only by the factor (s/(1+s))^j.
std::vector<BigReal> kummer_u_ladder(const BigReal& a0, const BigReal& b, const BigReal& z,
                                     std::size_t count, const PrecisionContext& ctx,
                                     Exec exec = Exec::Parallel);

/// The unique positive root of c3 u^3 + c2 u^2 + c0 = 0 (c3 > 0, c0 < 0),
/// required to lie in (0, 1). Cardano closed form, then Newton polishing.
BigReal real_cubic_root(const BigReal& c3, const BigReal& c2, const BigReal& c0,
                        const PrecisionContext& ctx);

}  // namespace pjlab
