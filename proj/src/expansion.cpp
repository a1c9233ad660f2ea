#include "pjlab/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace pjlab {

std::string_view series_name(SeriesKind k) {
  switch (k) {
    case SeriesKind::BETA: return "BETA";
    case SeriesKind::P: return "P";
    case SeriesKind::SIGMA: return "SIGMA";
    case SeriesKind::LOGD: return "LOGD";
    case SeriesKind::A_SERIES: return "A_SERIES";
    case SeriesKind::F_SERIES: return "F_SERIES";
  }
  return "?";
}

namespace {

// Shorthand shared by all the coefficient lists.
struct Symbols {
  BigReal a, t, t13, t23, c2_13, c2_23, ln4;

  explicit Symbols(const WeightParams& p)
      : a(p.alpha()),
        t(p.t()),
        t13(cbrt(p.t())),
        t23(square(t13)),
        c2_13(cbrt(BigReal(p.bits(), 2))),
        c2_23(square(c2_13)),
        ln4(ldexp(BigReal::ln2(p.bits()), 1)) {}

  BigReal q(long num, long den) const { return BigReal(a.bits(), num) / den; }
};

struct Builder {
  SeriesKind kind;
  WeightParams params;
  std::vector<SeriesTerm> terms;

  Builder& add(int e, BigReal c) {
    terms.push_back({e, false, std::move(c), {}, 1});
    return *this;
  }
  Builder& add_log(int e, BigReal c) {
    terms.push_back({e, true, std::move(c), {}, 1});
    return *this;
  }
  Builder& slot(int e, std::string name, int sign) {
    terms.push_back({e, false, std::nullopt, std::move(name), sign});
    return *this;
  }
  ExpansionSeries done() { return {kind, std::move(params), std::move(terms)}; }
};

}  // namespace

ExpansionSeries ExpansionSeries::with_constant(const std::string& name, const BigReal& value) const {
  ExpansionSeries out = *this;
  bool found = false;
  for (auto& term : out.terms) {
    if (term.slot != name) continue;
    term.coefficient = term.slot_sign * convert(value, bits());
    found = true;
  }
  if (!found) throw DomainError("series has no constant named " + name);
  return out;
}

BigReal ExpansionSeries::coefficient(int e) const {
  BigReal sum(bits());
  for (const auto& term : terms) {
    if (term.exponent_thirds != e || term.log_n) continue;
    if (!term.coefficient) throw UnfittedConstant("constant " + term.slot + " not fitted");
    sum += *term.coefficient;
  }
  return sum;
}

ExpansionSeries beta_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal tm2a = t - ldexp(a, 1);
  Builder b{SeriesKind::BETA, p, {}};
  b.add(0, s.q(1, 4));
  b.add(-1, BigReal(ctx));
  b.add(-2, -(s.t23 / (4 * s.c2_23)));
  b.add(-3, BigReal(ctx));
  b.add(-4, s.t13 * tm2a / (12 * s.c2_13));
  b.add(-5, s.t23 * a / (6 * s.c2_23));
  b.add(-6, (5 - 3 * square(tm2a)) / 144);
  b.add(-7, -(a * s.t13 * tm2a / (9 * s.c2_13)));
  b.add(-8, 5 * (2 * square(t) * t - 12 * square(t) * a - t * (12 * square(a) + 17) -
                 16 * a * (square(a) - 1)) /
                (1296 * s.c2_23 * s.t13));
  return b.done();
}

ExpansionSeries p_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal tm2a = t - ldexp(a, 1);
  BigReal twoa_m1 = ldexp(a, 1) - 1;
  Builder b{SeriesKind::P, p, {}};
  b.add(3, s.q(-1, 4));
  b.add(2, BigReal(ctx));
  b.add(1, 3 * s.t23 / (4 * s.c2_23));
  b.add(0, (ldexp(a, 1) + 1 - 4 * t) / 8);
  b.add(-1, s.t13 * tm2a / (4 * s.c2_13));
  b.add(-2, twoa_m1 * s.t23 / (8 * s.c2_23));
  b.add(-3, (5 - 3 * square(tm2a)) / 144);
  b.add(-4, -(twoa_m1 * s.t13 * tm2a / (24 * s.c2_13)));
  return b.done();
}

ExpansionSeries sigma_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal tm2a = t - ldexp(a, 1);
  BigReal a2 = square(a);
  BigReal t2 = square(t);
  Builder b{SeriesKind::SIGMA, p, {}};
  b.add(4, -(3 * s.t23 / s.c2_23));
  b.add(2, -(s.t13 * tm2a / s.c2_13));
  b.add(1, -(2 * s.c2_13 * s.t23 * a));
  b.add(0, (3 * t2 + 60 * t * a - 24 * a2 + 4) / 36);
  b.add(-1, -(s.c2_23 * a * s.t13 * tm2a / 3));
  b.add(-2, -((t2 * t - 6 * t2 * a + 48 * t * a2 + ldexp(t, 1) - 8 * a2 * a + 8 * a) /
              (54 * s.t13 * s.c2_23)));
  return b.done();
}

ExpansionSeries logd_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal a2 = square(a);
  BigReal t2 = square(t);
  BigReal tm8a = t - 8 * a;
  Builder b{SeriesKind::LOGD, p, {}};
  b.add(6, -BigReal::ln2(ctx.bits()));
  b.add(4, -(9 * s.t23 / (4 * s.c2_23)));
  b.slot(3, "c1", -1);
  b.add(2, -(3 * s.t13 * tm8a / (8 * s.c2_13)));
  b.add(1, -(3 * s.t23 * a / s.c2_23));
  b.add_log(0, (12 * a2 - 5) / 36);
  b.add(0, (3 * t2 + 120 * t * a - 8 * (6 * a2 - 1) * log(t)) / 144);
  b.slot(0, "c0", -1);
  b.add(-1, -(a * s.t13 * tm8a / (4 * s.c2_13)));
  b.add(-2, -((5 * t2 * t - 48 * t2 * a + 40 * (24 * a2 + 1) * t + 320 * a * (a2 - 1)) /
              (1440 * s.t13 * s.c2_23)));
  return b.done();
}

ExpansionSeries a_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal a2 = square(a);
  BigReal t2 = square(t);
  BigReal tm8a = t - 8 * a;
  Builder b{SeriesKind::A_SERIES, p, {}};
  b.add(3, s.ln4);
  b.add(1, 3 * s.t23 / s.c2_23);
  b.add(0, a * s.ln4);
  b.add(-1, s.t13 * tm8a / (4 * s.c2_13));
  b.add(-2, s.t23 * a / s.c2_23);
  b.add(-3, -(a2 / 3));
  b.add(-4, -(a * s.t13 * tm8a / (12 * s.c2_13)));
  b.add(-5, -((5 * t2 * t - 48 * t2 * a + 960 * a2 * t + 320 * a2 * a) /
              (2160 * s.c2_23 * s.t13)));
  b.add(-6, a2 * a / 3);
  return b.done();
}

ExpansionSeries f_series(const WeightParams& p_in, const PrecisionContext& ctx) {
  WeightParams p = p_in.at_precision(ctx.bits());
  Symbols s(p);
  const BigReal& a = s.a;
  const BigReal& t = s.t;
  BigReal a2 = square(a);
  BigReal t2 = square(t);
  BigReal tm8a = t - 8 * a;
  Builder b{SeriesKind::F_SERIES, p, {}};
  b.add(6, BigReal::ln2(ctx.bits()));
  b.add(4, 9 * s.t23 / (4 * s.c2_23));
  b.add(3, a * s.ln4);
  b.add(2, 3 * s.t13 * tm8a / (8 * s.c2_13));
  b.add(1, 3 * s.t23 * a / s.c2_23);
  b.add_log(0, -(a2 / 3));
  b.slot(0, "C0", 1);
  b.add(-1, a * s.t13 * tm8a / (4 * s.c2_13));
  b.add(-2, (5 * t2 * t - 48 * t2 * a + 960 * a2 * t + 320 * a2 * a) / (1440 * s.t13 * s.c2_23));
  return b.done();
}

ExpansionSeries make_series(SeriesKind kind, const WeightParams& params,
                            const PrecisionContext& ctx) {
  switch (kind) {
    case SeriesKind::BETA: return beta_series(params, ctx);
    case SeriesKind::P: return p_series(params, ctx);
    case SeriesKind::SIGMA: return sigma_series(params, ctx);
    case SeriesKind::LOGD: return logd_series(params, ctx);
    case SeriesKind::A_SERIES: return a_series(params, ctx);
    case SeriesKind::F_SERIES: return f_series(params, ctx);
  }
  throw DomainError("unknown series kind");
}

// ---------------------------------------------------------------------------

BigReal expansion_eval(const ExpansionSeries& s, const BigReal& n_in,
                       std::optional<int> min_exponent_thirds) {
  const long bits = s.bits();
  BigReal n = convert(n_in, bits);
  if (!(n > 0)) throw DomainError("series evaluated at non-positive n");
  BigReal n13 = cbrt(n);
  BigReal ln_n = log(n);
  BigReal sum(bits);
  for (const auto& term : s.terms) {
    if (min_exponent_thirds && term.exponent_thirds < *min_exponent_thirds) continue;
    if (!term.coefficient)
      throw UnfittedConstant("series " + std::string(series_name(s.kind)) + " needs constant " +
                             term.slot);
    if (term.coefficient->is_zero()) continue;
    BigReal v = *term.coefficient * pow(n13, BigReal(bits, term.exponent_thirds));
    if (term.log_n) v *= ln_n;
    sum += v;
  }
  return sum;
}

DecayFit decay_fit(const std::vector<std::pair<long, BigReal>>& exact, const ExpansionSeries& s,
                   std::optional<int> min_exponent_thirds) {
  DecayFit fit{0.0, 0.0, {}, {}};
  std::vector<double> xs, ys;
  for (const auto& [n, value] : exact) {
    const long bits = value.bits();
    BigReal approx = convert(expansion_eval(s, BigReal(s.bits(), n), min_exponent_thirds), bits);
    BigReal err = abs(value - approx);
    BigReal floor = ldexp(abs(value), -(bits - 32));
    if (err.is_zero() || !(err > floor)) {
      fit.excluded.push_back(n);
      continue;
    }
    fit.used.push_back(n);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(log(err).to_double());
  }
  if (xs.size() < 2) throw DegenerateFit("fewer than two usable points for a decay fit");
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw DegenerateFit("decay fit needs at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::vector<BigReal> fit_power_coefficients(const std::vector<std::pair<long, BigReal>>& data,
                                            const std::vector<int>& exps) {
  const size_t k = exps.size();
  if (data.size() < k || k == 0) throw DegenerateFit("not enough points for the requested basis");
  const long bits = data.front().second.bits();
  // Normal equations, solved by Gaussian elimination with partial pivoting.
  std::vector<std::vector<BigReal>> M(k, std::vector<BigReal>(k + 1, BigReal(bits)));
  for (const auto& [n, v] : data) {
    BigReal n13 = cbrt(BigReal(bits, n));
    std::vector<BigReal> phi;
    for (int e : exps) phi.push_back(pow(n13, BigReal(bits, e)));
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) M[i][j] += phi[i] * phi[j];
      M[i][k] += phi[i] * v;
    }
  }
  for (size_t c = 0; c < k; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < k; ++r)
      if (abs(M[r][c]) > abs(M[piv][c])) piv = r;
    if (M[piv][c].is_zero()) throw DegenerateFit("singular power-fit system");
    std::swap(M[c], M[piv]);
    for (size_t r = c + 1; r < k; ++r) {
      BigReal f = M[r][c] / M[c][c];
      for (size_t j = c; j <= k; ++j) M[r][j] -= f * M[c][j];
    }
  }
  std::vector<BigReal> x(k, BigReal(bits));
  for (size_t i = k; i-- > 0;) {
    BigReal acc = M[i][k];
    for (size_t j = i + 1; j < k; ++j) acc -= M[i][j] * x[j];
    x[i] = acc / M[i][i];
  }
  return x;
}

LogDConstants fit_logD_constants(const std::vector<std::pair<long, BigReal>>& pts,
                                 const WeightParams& params, const PrecisionContext& ctx,
                                 std::optional<std::pair<long, BigReal>> held_out) {
  if (pts.size() < 2) throw DegenerateFit("the ln D_n fit needs two points");
  const auto& [n1, v1] = pts[0];
  const auto& [n2, v2] = pts[1];
  if (n1 == n2) throw DegenerateFit("the ln D_n fit needs two distinct n");
  const long bits = ctx.bits();
  ExpansionSeries base = logd_series(params, ctx);
  // Known part with both constants set to zero; the remainder is -c1 n - c0.
  ExpansionSeries zero = base.with_constant("c1", BigReal(bits)).with_constant("c0", BigReal(bits));
  BigReal r1 = convert(v1, bits) - expansion_eval(zero, BigReal(bits, n1));
  BigReal r2 = convert(v2, bits) - expansion_eval(zero, BigReal(bits, n2));
  BigReal c1 = -(r1 - r2) / (n1 - n2);
  BigReal c0 = -(r1 + c1 * n1);

  BigReal a_ln4 = ldexp(BigReal::ln2(bits), 1) * convert(params.alpha(), bits);
  LogDConstants out{c1, c0, abs(c1 - a_ln4), std::nullopt, std::nullopt};
  if (held_out) {
    ExpansionSeries full = base.with_constant("c1", c1).with_constant("c0", c0);
    out.held_out_n = held_out->first;
    out.held_out_error = abs(convert(held_out->second, bits) -
                             expansion_eval(full, BigReal(bits, held_out->first)));
  }
  return out;
}

std::vector<std::pair<long, BigReal>> table_samples(const RecurrenceTable& T, SeriesKind kind,
                                                    long n_lo, long n_hi, long stride) {
  if (n_lo < 1 || n_hi < n_lo || stride < 1) throw DomainError("bad n-grid");
  const std::vector<BigReal>* src = nullptr;
  switch (kind) {
    case SeriesKind::BETA: src = &T.beta; break;
    case SeriesKind::P: src = &T.p; break;
    case SeriesKind::SIGMA: src = &T.sigma; break;
    case SeriesKind::LOGD: src = &T.logD; break;
    default: throw DomainError("no table array for this series");
  }
  if (n_hi >= static_cast<long>(src->size())) throw DomainError("n-grid exceeds the table");
  std::vector<std::pair<long, BigReal>> out;
  for (long n = n_lo; n <= n_hi; n += stride) out.emplace_back(n, (*src)[static_cast<size_t>(n)]);
  return out;
}

}  // namespace pjlab
