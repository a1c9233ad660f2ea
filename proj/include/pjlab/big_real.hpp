#pragma once

// Arbitrary-precision real scalar built on MPFR, plus the precision context
// every numerical routine in pjlab is parameterized by.

#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pjlab {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when a computation cannot reach its accuracy target at the current
// precision (quadrature non-convergence, loss of positivity in a pivot).
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContextMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

inline constexpr long kMinBits = 128;
inline constexpr int kDefaultQuadLevel = 12;

/// Working precision, tanh-sinh refinement depth and finite-difference step.
/// Immutable once built.
class PrecisionContext {
 public:
  explicit PrecisionContext(long bits, int quad_level = kDefaultQuadLevel,
                            std::optional<long> fd_step_exponent = std::nullopt);

  long bits() const { return bits_; }
  int quad_level() const { return quad_level_; }
  /// Finite-difference step is 2^-fd_step_exponent.
  long fd_step_exponent() const { return fd_step_exponent_; }
  bool fd_step_overridden() const { return fd_overridden_; }

  /// Same settings at a different precision. A non-overridden step exponent
  /// follows the new precision.
  PrecisionContext with_bits(long bits) const;
  PrecisionContext with_fd_step_exponent(long e) const;

  /// Decimal digits used when serializing values of this precision.
  int output_digits() const;

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  long bits_;
  int quad_level_;
  long fd_step_exponent_;
  bool fd_overridden_;
};

/// Precision policy for a pipeline that factors Hankel matrices up to degree
/// n_max: max(256, 12 n_max).
long default_bits(int n_max);

/// RAII wrapper around an mpfr_t. The precision of the value is its context
/// tag: binary operations between values of different precision throw
/// ContextMismatch. Operations with machine integers are exact-input.
class BigReal {
 public:
  explicit BigReal(const PrecisionContext& ctx) : BigReal(ctx.bits()) {}
  BigReal(const PrecisionContext& ctx, long v);
  explicit BigReal(long bits);
  BigReal(long bits, long v);

  /// Correctly rounded decimal parse; throws DomainError on malformed input.
  static BigReal parse(const PrecisionContext& ctx, std::string_view text);
  static BigReal from_double(const PrecisionContext& ctx, double v);
  /// num/den rounded once.
  static BigReal ratio(const PrecisionContext& ctx, long num, long den);
  static BigReal pi(long bits);
  static BigReal ln2(long bits);
  static BigReal pi(const PrecisionContext& ctx) { return pi(ctx.bits()); }

  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(const BigReal& o);
  BigReal& operator=(BigReal&& o) noexcept;
  ~BigReal();

  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator+=(long o);
  BigReal& operator-=(long o);
  BigReal& operator*=(long o);
  BigReal& operator/=(long o);

  BigReal operator-() const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Binary exponent e with 0.5 <= |x| 2^-e < 1; LONG_MIN for zero.
  long exponent() const;

  /// Scientific notation with the given number of significant digits.
  std::string to_string(int digits) const;
  std::string to_string() const;

 private:
  mpfr_t v_;
  void require_same(const BigReal& o) const;
};

BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);
BigReal operator+(BigReal&& a, const BigReal& b);
BigReal operator-(BigReal&& a, const BigReal& b);
BigReal operator*(BigReal&& a, const BigReal& b);
BigReal operator/(BigReal&& a, const BigReal& b);
BigReal operator+(const BigReal& a, long b);
BigReal operator-(const BigReal& a, long b);
BigReal operator*(const BigReal& a, long b);
BigReal operator/(const BigReal& a, long b);
BigReal operator+(long a, const BigReal& b);
BigReal operator-(long a, const BigReal& b);
BigReal operator*(long a, const BigReal& b);
BigReal operator/(long a, const BigReal& b);

int compare(const BigReal& a, const BigReal& b);
inline bool operator<(const BigReal& a, const BigReal& b) { return compare(a, b) < 0; }
inline bool operator>(const BigReal& a, const BigReal& b) { return compare(a, b) > 0; }
inline bool operator<=(const BigReal& a, const BigReal& b) { return compare(a, b) <= 0; }
inline bool operator>=(const BigReal& a, const BigReal& b) { return compare(a, b) >= 0; }
inline bool operator==(const BigReal& a, const BigReal& b) { return compare(a, b) == 0; }
inline bool operator!=(const BigReal& a, const BigReal& b) { return compare(a, b) != 0; }
bool operator<(const BigReal& a, long b);
bool operator>(const BigReal& a, long b);
bool operator<=(const BigReal& a, long b);
bool operator>=(const BigReal& a, long b);
bool operator==(const BigReal& a, long b);

/// True when both values have identical bit patterns (sign, exponent, mantissa).
bool bit_identical(const BigReal& a, const BigReal& b);

BigReal abs(BigReal x);
BigReal sqrt(BigReal x);
BigReal cbrt(BigReal x);
BigReal square(BigReal x);
BigReal exp(BigReal x);
BigReal expm1(BigReal x);
BigReal log(BigReal x);
BigReal log1p(BigReal x);
BigReal sinh(BigReal x);
BigReal cosh(BigReal x);
BigReal cos(BigReal x);
BigReal acos(BigReal x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(BigReal x, long k);
/// x * 2^k, exact.
BigReal ldexp(BigReal x, long k);
/// Value rounded to a different precision (the only sanctioned crossing).
BigReal convert(const BigReal& x, long bits);
BigReal max(const BigReal& a, const BigReal& b);

/// |a - b| / |b|, or |a| when b == 0.
BigReal relative_gap(const BigReal& a, const BigReal& b);

}  // namespace pjlab
