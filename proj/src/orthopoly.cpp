#include "pjlab/orthopoly.hpp"

#include "pjlab/quadrature.hpp"
#include "pjlab/special.hpp"

namespace pjlab {

WeightParams::WeightParams(BigReal alpha, BigReal t, bool check)
    : alpha_(std::move(alpha)), t_(std::move(t)) {
  if (alpha_.bits() != t_.bits()) throw ContextMismatch("alpha and t precision differ");
  if (check && !(alpha_ > 0)) throw DomainError("alpha must be positive");
  if (check && !(t_ > 0)) throw DomainError("t must be positive");
}

WeightParams::WeightParams(BigReal alpha, BigReal t)
    : WeightParams(std::move(alpha), std::move(t), true) {}

WeightParams WeightParams::parse(const PrecisionContext& ctx, std::string_view alpha,
                                 std::string_view t) {
  WeightParams w(BigReal::parse(ctx, alpha), BigReal::parse(ctx, t));
  w.alpha_text_ = std::string(alpha);
  w.t_text_ = std::string(t);
  return w;
}

WeightParams WeightParams::at_precision(long bits) const {
  if (bits == this->bits()) return *this;
  PrecisionContext ctx(bits);
  WeightParams w(alpha_text_.empty() ? convert(alpha_, bits) : BigReal::parse(ctx, alpha_text_),
                 t_text_.empty() ? convert(t_, bits) : BigReal::parse(ctx, t_text_),
                 alpha_ > 0);
  w.alpha_text_ = alpha_text_;
  w.t_text_ = t_text_;
  return w;
}

WeightParams WeightParams::with_t(BigReal t) const {
  WeightParams w(alpha_, std::move(t), alpha_ > 0);
  w.alpha_text_ = alpha_text_;
  return w;
}

WeightParams WeightParams::shifted_alpha_unchecked(long delta) const {
  return WeightParams(alpha_ + delta, t_, false);
}

BigReal WeightParams::log_weight(const BigReal& s) const {
  return alpha_ * log(s) - t_ / s;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<BigReal> kummer_moments(const BigReal& alpha, const BigReal& t, int k_max,
                                    const PrecisionContext& ctx, Exec exec) {
  const size_t count = static_cast<size_t>(k_max / 2 + 1);
  BigReal half = BigReal::ratio(ctx, 1, 2);
  auto u = kummer_u_ladder(half, -alpha, t, count, ctx, exec);
  std::vector<BigReal> mu(static_cast<size_t>(k_max + 1), BigReal(ctx));
  BigReal scale = exp(-t) * gamma(half);  // e^-t Gamma(j + 1/2), advanced below
  BigReal a = half;
  for (size_t j = 0; j < count; ++j) {
    mu[2 * j] = scale * u[j];
    scale *= a;
    a += 1;
  }
  return mu;
}

}  // namespace

MomentTable build_moments(const WeightParams& params, int k_max, const PrecisionContext& ctx,
                          bool with_alpha_minus_one, Exec exec) {
  if (k_max < 2 || k_max % 2 != 0) throw DomainError("k_max must be even and >= 2");
  if (params.bits() != ctx.bits()) throw ContextMismatch("weight parameters precision");
  MomentTable table{params, k_max, kummer_moments(params.alpha(), params.t(), k_max, ctx, exec),
                    std::nullopt};
  if (with_alpha_minus_one)
    table.mu_alpha_minus_one = kummer_moments(params.alpha() - 1, params.t(), k_max, ctx, exec);
  return table;
}

std::vector<BigReal> quadrature_moments(const WeightParams& params, int k_max,
                                        const PrecisionContext& ctx, Exec exec) {
  if (k_max < 0) throw DomainError("k_max must be non-negative");
  const size_t count = static_cast<size_t>(k_max / 2 + 1);
  auto integrand = [&](const Abscissa& a, std::vector<BigReal>& out) {
    BigReal s = a.from_lo * a.from_hi;  // 1 - x^2
    out[0] = exp(params.log_weight(s));
    BigReal x2 = square(a.x);
    for (size_t j = 1; j < count; ++j) out[j] = out[j - 1] * x2;
  };
  QuadOptions opt;
  opt.exec = exec;
  auto even = tanh_sinh_integrate_batch(integrand, count, BigReal(ctx, -1), BigReal(ctx, 1),
                                        ctx, opt);
  std::vector<BigReal> mu(static_cast<size_t>(k_max + 1), BigReal(ctx));
  for (size_t j = 0; j < count; ++j) mu[2 * j] = std::move(even[j]);
  return mu;
}

// ---------------------------------------------------------------------------

RecurrenceTable factor_hankel(const MomentTable& moments, int n_max, const PrecisionContext& ctx,
                              Exec exec) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (moments.k_max < 2 * n_max) throw DomainError("moment table too short for n_max");
  const int N = n_max + 1;

  // Lower triangle, row i holds columns 0..i.
  std::vector<std::vector<BigReal>> a(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    a[i].reserve(static_cast<size_t>(i + 1));
    for (int j = 0; j <= i; ++j) a[i].push_back(moments.mu[static_cast<size_t>(i + j)]);
  }

  std::vector<BigReal> h;
  h.reserve(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j) {
    const BigReal d = a[j][j];
    if (!(d > 0))
      throw PrecisionExhausted("Hankel pivot " + std::to_string(j) + " is not positive at " +
                               std::to_string(ctx.bits()) + " bits");
    // Column j: entries with i - j odd vanish for an even weight. They are
    // never touched below, so any nonzero one means an indexing error.
    for (int i = j + 1; i < N; i += 2)
      if (!a[i][j].is_zero()) throw InvariantViolation("parity zero lost in Hankel factorization");

    const BigReal inv = 1 / d;
    auto update_row = [&](int i) {
      const BigReal li = a[i][j] * inv;
      for (int k = j + 2; k <= i; k += 2) a[i][k] -= li * a[k][j];
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 2)
      for (int i = j + 2; i < N; i += 2) update_row(i);
    } else {
      for (int i = j + 2; i < N; i += 2) update_row(i);
    }
    h.push_back(d);
  }

  RecurrenceTable t{moments.params, ctx, n_max, std::move(h), {}, {}, {}, {}, {}, {}};
  t.logD.assign(static_cast<size_t>(N + 1), BigReal(ctx));
  t.beta.assign(static_cast<size_t>(N), BigReal(ctx));
  t.p.assign(static_cast<size_t>(N + 1), BigReal(ctx));
  for (int n = 0; n < N; ++n) {
    t.logD[n + 1] = t.logD[n] + log(t.h[n]);
    if (n > 0) t.beta[n] = t.h[n] / t.h[n - 1];
    t.p[n + 1] = t.p[n] - t.beta[n];
  }
  return t;
}

void ladder_quantities(RecurrenceTable& t) {
  const auto& a = t.alpha();
  const auto& tt = t.t();
  const BigReal two_a = ldexp(a, 1);
  t.r.assign(static_cast<size_t>(t.n_max + 1), BigReal(t.ctx));
  t.R.assign(static_cast<size_t>(t.n_max), BigReal(t.ctx));
  for (int n = 0; n <= t.n_max; ++n)
    t.r[n] = n - (two_a + (2 * n + 1)) * t.beta[n] + ldexp(t.p[n], 1);
  for (int n = 0; n < t.n_max; ++n)
    t.R[n] = ldexp(tt, 1) + (2 * n + 1) - (two_a + (2 * n + 3)) * (t.beta[n] + t.beta[n + 1]) +
             ldexp(t.p[n], 2);
}

void sigma_values(RecurrenceTable& t) {
  const BigReal two_a = ldexp(t.alpha(), 1);
  t.sigma.assign(static_cast<size_t>(t.n_max + 1), BigReal(t.ctx));
  for (int n = 0; n <= t.n_max; ++n)
    t.sigma[n] = -(n * (ldexp(t.t(), 1) + n)) - (two_a + (2 * n - 1)) * t.p[n] -
                 (two_a + (2 * n + 1)) * t.p[n + 1];
}

RecurrenceTable build_table(const WeightParams& params, int n_max, const PrecisionContext& ctx,
                            Exec exec, int escalations) {
  PrecisionContext c = ctx;
  for (int attempt = 0;; ++attempt) {
    try {
      WeightParams w = params.at_precision(c.bits());
      auto moments = build_moments(w, 2 * n_max, c, false, exec);
      auto table = factor_hankel(moments, n_max, c, exec);
      ladder_quantities(table);
      sigma_values(table);
      return table;
    } catch (const PrecisionExhausted&) {
      if (attempt >= escalations) throw;
      c = c.with_bits(2 * c.bits());
    }
  }
}

// ---------------------------------------------------------------------------

PolyCoeffs polynomial_coeffs(const RecurrenceTable& table, int n) {
  if (n < 0 || n > table.n_max) throw DomainError("polynomial degree out of table range");
  const auto& ctx = table.ctx;
  std::vector<BigReal> prev;  // P_{-1}
  std::vector<BigReal> cur{BigReal(ctx, 1)};
  for (int k = 0; k < n; ++k) {
    std::vector<BigReal> next(static_cast<size_t>(k + 2), BigReal(ctx));
    for (int i = 0; i <= k; ++i) next[i + 1] = cur[i];
    for (size_t i = 0; i < prev.size(); ++i) next[i] -= table.beta[k] * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return PolyCoeffs{n, std::move(cur)};
}

PolyCoeffs::Jet PolyCoeffs::evaluate(const BigReal& z) const {
  BigReal v(z.bits()), d1(z.bits()), d2(z.bits());
  for (int k = n; k >= 0; --k) {
    d2 = d2 * z + ldexp(d1, 1);
    d1 = d1 * z + v;
    v = v * z + coeffs[static_cast<size_t>(k)];
  }
  return {std::move(v), std::move(d1), std::move(d2)};
}

}  // namespace pjlab
