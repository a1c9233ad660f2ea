#pragma once

// Large-n series in powers of n^{1/3} (plus ln n terms) and the tools that
// compare them with exact finite-n data.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pjlab/big_real.hpp"
#include "pjlab/orthopoly.hpp"

namespace pjlab {

struct UnfittedConstant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SeriesKind { BETA, P, SIGMA, LOGD, A_SERIES, F_SERIES };

std::string_view series_name(SeriesKind k);

/// coefficient * n^{exponent_thirds/3} (times ln n when log_n). A term with a
/// `slot` name carries an unknown constant; its coefficient is
/// slot_sign * constant and stays empty until the constant is supplied.
struct SeriesTerm {
  int exponent_thirds;
  bool log_n = false;
  std::optional<BigReal> coefficient;
  std::string slot;
  int slot_sign = 1;
};

struct ExpansionSeries {
  SeriesKind kind;
  WeightParams params;
  std::vector<SeriesTerm> terms;  // decreasing exponent

  /// Copy with the named constant filled in.
  ExpansionSeries with_constant(const std::string& slot, const BigReal& value) const;
  /// Coefficient of n^{e/3} without ln n; zero when the series has no such term.
  BigReal coefficient(int exponent_thirds) const;
  long bits() const { return params.bits(); }
};

/// beta_n = 1/4 + sum_{j=1..8} a_j n^{-j/3}
ExpansionSeries beta_series(const WeightParams& params, const PrecisionContext& ctx);
/// p(n) = b_{-3} n + ... + b_4 n^{-4/3}
ExpansionSeries p_series(const WeightParams& params, const PrecisionContext& ctx);
/// sigma_n from n^{4/3} down to n^{-2/3}
ExpansionSeries sigma_series(const WeightParams& params, const PrecisionContext& ctx);
/// ln D_n with slots "c1" (coefficient -c1 of n) and "c0" (extra constant -c0)
ExpansionSeries logd_series(const WeightParams& params, const PrecisionContext& ctx);
/// Lagrange multiplier A down to n^{-2}
ExpansionSeries a_series(const WeightParams& params, const PrecisionContext& ctx);
/// Free energy F[sigma] down to n^{-2/3}, slot "C0"
ExpansionSeries f_series(const WeightParams& params, const PrecisionContext& ctx);

ExpansionSeries make_series(SeriesKind kind, const WeightParams& params,
                            const PrecisionContext& ctx);

/// Partial sum over terms with exponent >= min_exponent_thirds (all terms by
/// default). Throws UnfittedConstant when an empty slot is in range.
BigReal expansion_eval(const ExpansionSeries& s, const BigReal& n,
                       std::optional<int> min_exponent_thirds = std::nullopt);

struct DecayFit {
  double slope;
  double intercept;
  std::vector<long> used;
  std::vector<long> excluded;  // error at the precision floor
};

/// Least-squares slope of ln|exact - partial sum| against ln n. Points whose
/// error is within 2^-(bits-32) of the exact value are excluded.
DecayFit decay_fit(const std::vector<std::pair<long, BigReal>>& exact, const ExpansionSeries& s,
                   std::optional<int> min_exponent_thirds = std::nullopt);

/// Least-squares coefficients of the basis n^{e/3}, e in exponents_thirds,
/// fitted to (n, value) pairs in working precision.
std::vector<BigReal> fit_power_coefficients(const std::vector<std::pair<long, BigReal>>& data,
                                            const std::vector<int>& exponents_thirds);

struct LogDConstants {
  BigReal c1;
  BigReal c0;
  BigReal conjecture_gap;  // |c1 - a ln 4|
  std::optional<long> held_out_n;
  std::optional<BigReal> held_out_error;  // |series - exact| at held_out_n
};

/// Solves for (c1, c0) from the first two entries of `fit_points`, then
/// evaluates the completed series at `held_out` when given.
LogDConstants fit_logD_constants(const std::vector<std::pair<long, BigReal>>& fit_points,
                                 const WeightParams& params, const PrecisionContext& ctx,
                                 std::optional<std::pair<long, BigReal>> held_out = std::nullopt);

/// (n, value) pairs for n in [n_lo, n_hi] with the given stride, drawn from
/// one table: beta, p, sigma or logD according to `kind`.
std::vector<std::pair<long, BigReal>> table_samples(const RecurrenceTable& table, SeriesKind kind,
                                                    long n_lo, long n_hi, long stride);

}  // namespace pjlab
