#include "pjlab/big_real.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>
#include <vector>

namespace pjlab {

PrecisionContext::PrecisionContext(long bits, int quad_level,
                                   std::optional<long> fd_step_exponent)
    : bits_(bits),
      quad_level_(quad_level),
      fd_step_exponent_(fd_step_exponent.value_or(bits / 4)),
      fd_overridden_(fd_step_exponent.has_value()) {
  if (bits < kMinBits)
    throw DomainError("precision must be at least 128 bits, got " + std::to_string(bits));
  if (quad_level < 1) throw DomainError("quad_level must be positive");
  if (fd_step_exponent_ < 1) throw DomainError("fd_step_exponent must be positive");
}

PrecisionContext PrecisionContext::with_bits(long bits) const {
  return PrecisionContext(bits, quad_level_,
                          fd_overridden_ ? std::optional<long>(fd_step_exponent_)
                                         : std::nullopt);
}

PrecisionContext PrecisionContext::with_fd_step_exponent(long e) const {
  return PrecisionContext(bits_, quad_level_, e);
}

int PrecisionContext::output_digits() const {
  return static_cast<int>(std::ceil(static_cast<double>(bits_) * 0.302)) + 2;
}

long default_bits(int n_max) { return std::max(256L, 12L * n_max); }

// ---------------------------------------------------------------------------

BigReal::BigReal(long bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(long bits, long v) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(const PrecisionContext& ctx, long v) : BigReal(ctx.bits(), v) {}

BigReal BigReal::parse(const PrecisionContext& ctx, std::string_view text) {
  BigReal r(ctx);
  std::string s(text);
  if (s.empty()) throw DomainError("empty number");
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == nullptr || end == s.c_str() || *end != '\0')
    throw DomainError("cannot parse '" + s + "' as a real number");
  if (!r.is_finite()) throw DomainError("non-finite value '" + s + "'");
  return r;
}

BigReal BigReal::from_double(const PrecisionContext& ctx, double v) {
  BigReal r(ctx);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

BigReal BigReal::ratio(const PrecisionContext& ctx, long num, long den) {
  BigReal r(ctx, num);
  mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi(long bits) {
  BigReal r(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::ln2(long bits) {
  BigReal r(bits);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

BigReal::BigReal(const BigReal& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

// A moved-from value keeps a null limb pointer; it may only be destroyed or
// assigned to.
BigReal::BigReal(BigReal&& o) noexcept {
  v_[0] = o.v_[0];
  o.v_[0]._mpfr_d = nullptr;
}

BigReal& BigReal::operator=(const BigReal& o) {
  if (this == &o) return *this;
  if (v_[0]._mpfr_d == nullptr) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
  }
  mpfr_set(v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
  if (this == &o) return *this;
  if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
  v_[0] = o.v_[0];
  o.v_[0]._mpfr_d = nullptr;
  return *this;
}

BigReal::~BigReal() {
  if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
}

void BigReal::require_same(const BigReal& o) const {
  if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
    throw ContextMismatch("arithmetic between values of " + std::to_string(bits()) +
                          " and " + std::to_string(o.bits()) + " bits");
}

BigReal& BigReal::operator+=(const BigReal& o) {
  require_same(o);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator-=(const BigReal& o) {
  require_same(o);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator*=(const BigReal& o) {
  require_same(o);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator/=(const BigReal& o) {
  require_same(o);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator+=(long o) {
  mpfr_add_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator/=(long o) {
  mpfr_div_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

long BigReal::exponent() const {
  if (mpfr_zero_p(v_)) return LONG_MIN;
  return static_cast<long>(mpfr_get_exp(v_));
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  digits = std::max(digits, 1);
  int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
  std::vector<char> buf(static_cast<size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data(), static_cast<size_t>(n));
}

std::string BigReal::to_string() const {
  return to_string(static_cast<int>(std::ceil(static_cast<double>(bits()) * 0.302)) + 2);
}

// ---------------------------------------------------------------------------

BigReal operator+(const BigReal& a, const BigReal& b) { return BigReal(a) += b; }
BigReal operator-(const BigReal& a, const BigReal& b) { return BigReal(a) -= b; }
BigReal operator*(const BigReal& a, const BigReal& b) { return BigReal(a) *= b; }
BigReal operator/(const BigReal& a, const BigReal& b) { return BigReal(a) /= b; }
BigReal operator+(BigReal&& a, const BigReal& b) { return std::move(a += b); }
BigReal operator-(BigReal&& a, const BigReal& b) { return std::move(a -= b); }
BigReal operator*(BigReal&& a, const BigReal& b) { return std::move(a *= b); }
BigReal operator/(BigReal&& a, const BigReal& b) { return std::move(a /= b); }
BigReal operator+(const BigReal& a, long b) { return BigReal(a) += b; }
BigReal operator-(const BigReal& a, long b) { return BigReal(a) -= b; }
BigReal operator*(const BigReal& a, long b) { return BigReal(a) *= b; }
BigReal operator/(const BigReal& a, long b) { return BigReal(a) /= b; }
BigReal operator+(long a, const BigReal& b) { return BigReal(b) += a; }
BigReal operator-(long a, const BigReal& b) {
  BigReal r(b.bits());
  mpfr_si_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
BigReal operator*(long a, const BigReal& b) { return BigReal(b) *= a; }
BigReal operator/(long a, const BigReal& b) {
  BigReal r(b.bits());
  mpfr_si_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

int compare(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.get(), b.get()); }
bool operator<(const BigReal& a, long b) { return mpfr_cmp_si(a.get(), b) < 0; }
bool operator>(const BigReal& a, long b) { return mpfr_cmp_si(a.get(), b) > 0; }
bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.get(), b) <= 0; }
bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.get(), b) >= 0; }
bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.get(), b) == 0; }

bool bit_identical(const BigReal& a, const BigReal& b) {
  if (a.bits() != b.bits()) return false;
  if (mpfr_nan_p(a.get()) || mpfr_nan_p(b.get()))
    return mpfr_nan_p(a.get()) && mpfr_nan_p(b.get());
  return mpfr_equal_p(a.get(), b.get()) && mpfr_signbit(a.get()) == mpfr_signbit(b.get());
}

#define PJLAB_UNARY(name, fn)         \
  BigReal name(BigReal x) {           \
    fn(x.get(), x.get(), MPFR_RNDN);  \
    return x;                         \
  }

PJLAB_UNARY(abs, mpfr_abs)
PJLAB_UNARY(sqrt, mpfr_sqrt)
PJLAB_UNARY(cbrt, mpfr_cbrt)
PJLAB_UNARY(square, mpfr_sqr)
PJLAB_UNARY(exp, mpfr_exp)
PJLAB_UNARY(expm1, mpfr_expm1)
PJLAB_UNARY(log, mpfr_log)
PJLAB_UNARY(log1p, mpfr_log1p)
PJLAB_UNARY(sinh, mpfr_sinh)
PJLAB_UNARY(cosh, mpfr_cosh)
PJLAB_UNARY(cos, mpfr_cos)
PJLAB_UNARY(acos, mpfr_acos)

#undef PJLAB_UNARY

BigReal pow(const BigReal& x, const BigReal& y) {
  if (x.bits() != y.bits()) throw ContextMismatch("pow between different precisions");
  BigReal r(x.bits());
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigReal pow(BigReal x, long k) {
  mpfr_pow_si(x.get(), x.get(), k, MPFR_RNDN);
  return x;
}

BigReal ldexp(BigReal x, long k) {
  mpfr_mul_2si(x.get(), x.get(), k, MPFR_RNDN);
  return x;
}

BigReal convert(const BigReal& x, long bits) {
  BigReal r(bits);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

BigReal relative_gap(const BigReal& a, const BigReal& b) {
  BigReal d = abs(a - b);
  if (b.is_zero()) return d;
  return d / abs(b);
}

}  // namespace pjlab
