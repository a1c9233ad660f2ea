#pragma once
// Reference computations used only by the tests. Each one follows a route
// that the library does not use, so agreement is evidence rather than
// self-consistency.

#include <functional>
#include <vector>

#include "pjlab/big_real.hpp"
#include "pjlab/orthopoly.hpp"

namespace oracle {

using pjlab::BigReal;

/// U(a, b, z) from the two-term 1F1 connection formula. For integer b the
/// formula is singular, so it is evaluated at b +- eps with 2x working
/// precision and the two values are averaged (error O(eps^2)).
BigReal kummer_u_series(const BigReal& a, const BigReal& b, const BigReal& z);

/// det of a symmetric matrix by fraction-free (Bareiss) elimination.
BigReal bareiss_det(std::vector<std::vector<BigReal>> m);

/// beta_n = D_{n+1} D_{n-1} / D_n^2 from Hankel determinants of quadrature
/// moments at twice the table precision, rounded back to `bits`.
BigReal beta_from_determinants(const pjlab::WeightParams& params, int n, long bits);

/// Root of f in (lo, hi) by bisection to full precision; f(lo), f(hi) must
/// differ in sign.
BigReal bisect(const std::function<BigReal(const BigReal&)>& f, BigReal lo, BigReal hi);

/// log2 of |a| (a != 0) as a double.
double log2_abs(const BigReal& a);

}  // namespace oracle
