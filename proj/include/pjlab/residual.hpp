#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pjlab/big_real.hpp"
#include "pjlab/orthopoly.hpp"

namespace pjlab {

enum class Relation {
  // t fixed
  S1,
  S21,
  S22,
  S2P1,
  S2P2,
  S2P3,
  BTD,
  PND,
  SND,
  POLY_ODE,
  LOWERING,
  // t derivatives
  EQ1,
  PNT,
  EQ2,
  RIC1,
  RIC2,
  ODE_R,
  ODE_SMALL_R,
  PV,
  SIGMA_ODE,
  SIGMA_DEF,
};

std::string_view relation_name(Relation r);

/// Raw residual of one relation, its scale (the magnitudes of the relation's
/// top-level terms) and relative = |residual| / scale.
struct ResidualReport {
  Relation relation;
  int n;
  WeightParams params;
  long bits;
  BigReal residual;
  BigReal scale;
  BigReal relative;
  bool pass;
  /// Sample point for relations evaluated at a complex-plane point z.
  std::optional<BigReal> z;

  std::string label() const;
  /// Re-evaluates pass against a different tolerance.
  void judge(const BigReal& tolerance) { pass = !(relative > tolerance); }
};

/// 2^-floor(bits/4), the default pass threshold.
BigReal default_tolerance(long bits);

enum class Normalization { SumOfMagnitudes, LargestTerm };

/// Accumulates the top-level terms of a relation written as sum(terms) = 0.
class TermSum {
 public:
  explicit TermSum(long bits) : sum_(bits), magnitude_(bits), largest_(bits) {}

  TermSum& add(const BigReal& term) {
    sum_ += term;
    BigReal m = abs(term);
    if (m > largest_) largest_ = m;
    magnitude_ += m;
    return *this;
  }

  const BigReal& sum() const { return sum_; }

  ResidualReport report(Relation rel, int n, const WeightParams& params,
                        const BigReal& tolerance,
                        Normalization norm = Normalization::SumOfMagnitudes) const;

 private:
  BigReal sum_;
  BigReal magnitude_;
  BigReal largest_;
};

/// Reports ordered by (relation, n, t, z); output is independent of the order
/// in which the checks ran.
void sort_reports(std::vector<ResidualReport>& reports);

}  // namespace pjlab
