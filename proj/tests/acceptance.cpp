// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// when any criterion fails. WARN lines report findings that do not fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pjlab/coulomb.hpp"
#include "pjlab/expansion.hpp"
#include "pjlab/painleve.hpp"
#include "pjlab/relations.hpp"
#include "pjlab/special.hpp"

using namespace pjlab;

namespace {

const std::vector<std::pair<const char*, const char*>> kPairs = {
    {"0.5", "0.5"}, {"0.5", "1"}, {"0.5", "2.5"}, {"1", "0.5"}, {"1", "1"},
    {"1", "2.5"},   {"2", "0.5"}, {"2", "1"},     {"2", "2.5"}};

std::string sci(const BigReal& v) { return v.to_string(3); }

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

BigReal lit(long bits, const char* s) { return BigReal::parse(PrecisionContext(bits), s); }

struct Outcome {
  bool pass = true;
  bool warn = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Tracker {
  BigReal worst;
  std::string where;
  explicit Tracker(long bits) : worst(bits) {}
  void see(const BigReal& v, const std::string& at) {
    BigReal c = convert(v, worst.bits());
    if (c > worst) {
      worst = c;
      where = at;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += "; runtime " + fixed(secs, 1) + " s over budget " + fixed(budget_s, 0) + " s";
  }
  if (!o.pass) failures += 1;
  const char* tag = !o.pass ? "FAIL" : o.warn ? "PASS (WARN)" : "PASS";
  std::printf("[%2d] %-4s %s: %s (%.1f s)\n", id, tag, title.c_str(), o.detail.c_str(), secs);
  for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
  std::fflush(stdout);
}

std::string at(const char* a, const char* t) { return std::string("(a,t)=(") + a + "," + t + ")"; }

// ---------------------------------------------------------------------------

Outcome moments_dual_path() {
  const long bits = 512;
  PrecisionContext ctx(bits);
  Tracker tr(bits);
  for (auto [a, t] : kPairs) {
    auto w = WeightParams::parse(ctx, a, t);
    auto closed = build_moments(w, 40, ctx);
    auto quad = quadrature_moments(w, 40, ctx);
    for (int k = 0; k <= 40; ++k) {
      if (k % 2) {
        if (!closed.mu[k].is_zero() || !quad[k].is_zero()) tr.see(BigReal(bits, 1), "odd moment");
        continue;
      }
      tr.see(relative_gap(closed.mu[k], quad[k]), at(a, t) + " k=" + std::to_string(k));
    }
  }
  Outcome o;
  o.pass = tr.worst <= lit(bits, "1e-70");
  o.detail = "max relative gap " + sci(tr.worst) + " at " + tr.where + " (limit 1e-70)";
  return o;
}

Outcome initial_values() {
  const long bits = 512;
  PrecisionContext ctx(bits);
  Tracker tr(bits);
  bool exact = true;
  for (auto [a, t] : kPairs) {
    auto T = build_table(WeightParams::parse(ctx, a, t), 2, ctx);
    exact = exact && T.beta[0].is_zero() && T.p[0].is_zero() && T.p[1].is_zero() && T.r[0].is_zero();
    BigReal half = lit(bits, "0.5");
    BigReal closed = 2 * T.t() * kummer_u(half, 1 - T.alpha(), T.t(), ctx) /
                     kummer_u(half, -T.alpha(), T.t(), ctx);
    tr.see(relative_gap(T.R[0], closed), at(a, t));
  }
  Outcome o;
  o.pass = exact && tr.worst <= lit(bits, "1e-70");
  o.detail = std::string("beta_0, p(0), p(1), r_0 ") + (exact ? "exactly zero" : "NOT exactly zero") +
             "; R_0 vs Kummer ratio max gap " + sci(tr.worst) + " at " + tr.where + " (limit 1e-70)";
  return o;
}

Outcome compatibility() {
  const long bits = 512;
  PrecisionContext ctx(bits);
  Tracker tr(bits);
  size_t rows = 0;
  for (auto [a, t] : kPairs) {
    auto T = build_table(WeightParams::parse(ctx, a, t), 52, ctx);
    if (T.bits() != bits) throw std::runtime_error("table escalated precision");
    for (int n = 0; n <= 50; ++n)
      for (const auto& r : check_compatibility(T, n)) {
        rows += 1;
        tr.see(r.relative, at(a, t) + " " + r.label() + " n=" + std::to_string(n));
      }
  }
  Outcome o;
  o.pass = tr.worst <= lit(bits, "1e-100");
  o.detail = std::to_string(rows) + " residuals, max relative " + sci(tr.worst) + " at " + tr.where +
             " (limit 1e-100)";
  return o;
}

Outcome difference_equations() {
  PrecisionContext lo_ctx(512), hi_ctx(1024);
  Tracker tr(512);
  double min_shrink = 1e300;
  std::string shrink_at;
  for (auto [a, t] : kPairs) {
    auto lo = build_table(WeightParams::parse(lo_ctx, a, t), 51, lo_ctx);
    auto hi = build_table(WeightParams::parse(hi_ctx, a, t), 51, hi_ctx);
    for (int n = 1; n <= 50; ++n) {
      std::vector<ResidualReport> L = {residual_beta_difference(lo, n), residual_p_difference(lo, n),
                                       residual_sigma_difference(lo, n)};
      std::vector<ResidualReport> H = {residual_beta_difference(hi, n), residual_p_difference(hi, n),
                                       residual_sigma_difference(hi, n)};
      for (size_t i = 0; i < L.size(); ++i) {
        std::string where = at(a, t) + " " + L[i].label() + " n=" + std::to_string(n);
        tr.see(L[i].relative, where);
        if (L[i].residual.is_zero() || H[i].residual.is_zero()) continue;
        double shrink = oracle::log2_abs(L[i].residual) - oracle::log2_abs(H[i].residual);
        shrink *= std::log10(2.0);
        if (shrink < min_shrink) {
          min_shrink = shrink;
          shrink_at = where;
        }
      }
    }
  }
  Outcome o;
  o.pass = tr.worst <= lit(512, "1e-80") && min_shrink >= 60;
  o.detail = "max relative " + sci(tr.worst) + " at " + tr.where +
             " (limit 1e-80); 512->1024 bits shrinks every residual by >= 10^" +
             fixed(min_shrink, 1) + " (worst " + shrink_at + ", limit 10^60)";
  return o;
}

Outcome polynomial_ode() {
  const long bits = 512;
  PrecisionContext ctx(bits);
  std::vector<BigReal> zs;
  for (const char* z : {"0", "0.5", "-0.5", "0.9", "-0.9"}) zs.push_back(lit(bits, z));
  Tracker tr(bits);
  size_t rows = 0;
  for (auto [a, t] : kPairs) {
    auto T = build_table(WeightParams::parse(ctx, a, t), 21, ctx);
    for (int n = 1; n <= 20; ++n) {
      for (const auto& r : check_polynomial_ode(T, n, zs)) {
        rows += 1;
        tr.see(r.relative, at(a, t) + " " + r.label() + " n=" + std::to_string(n));
      }
      for (const auto& z : zs) {
        auto r = check_lowering(T, n, z);
        rows += 1;
        tr.see(r.relative, at(a, t) + " " + r.label() + " n=" + std::to_string(n));
      }
    }
  }
  Outcome o;
  o.pass = tr.worst <= lit(bits, "1e-80");
  o.detail = std::to_string(rows) + " residuals, max relative " + sci(tr.worst) + " at " + tr.where +
             " (limit 1e-80)";
  return o;
}

Outcome differential_relations() {
  const long bits = 512;
  PrecisionContext ctx(bits);
  const int n_top = 10;
  Tracker tr(bits);
  size_t rows = 0;
  double sig_lo = 1e9, sig_hi = -1e9;
  for (auto [a, t] : kPairs) {
    auto w = WeightParams::parse(ctx, a, t);
    auto B = StencilBundle::build(w, n_top, ctx, Exec::Parallel, 128);
    for (int n = 0; n <= n_top; ++n) {
      B.n_target = n;
      for (const auto& r : check_all_differential(B)) {
        rows += 1;
        tr.see(r.relative, at(a, t) + " " + r.label() + " n=" + std::to_string(n));
      }
    }
    auto pv0 = check_painleve_v_closed_form(w, ctx.with_fd_step_exponent(128));
    rows += 1;
    tr.see(pv0.relative, at(a, t) + " PV n=0 (Kummer form)");
    for (int n : {1, 5}) {
      for (const auto& s : step_signature(w, n, ctx, 16)) {
        sig_lo = std::min(sig_lo, s.log2_ratio);
        sig_hi = std::max(sig_hi, s.log2_ratio);
      }
    }
  }
  Outcome o;
  bool sig_ok = sig_lo > 3.5 && sig_hi < 4.5;
  o.pass = tr.worst <= lit(bits, "1e-60") && sig_ok;
  o.detail = std::to_string(rows) + " residuals at h=2^-128, max relative " + sci(tr.worst) + " at " +
             tr.where + " (limit 1e-60); step halving at h=2^-16 gives log2 ratio in [" +
             fixed(sig_lo) + ", " + fixed(sig_hi) + "] (fourth order: 4)";
  return o;
}

// Shared exact table for the large-n criteria.
struct LargeN {
  PrecisionContext ctx{2048};
  WeightParams w = WeightParams::parse(ctx, "1", "1");
  RecurrenceTable T = build_table(w, 161, ctx);
};

LargeN& large_n() {
  static LargeN data;
  return data;
}

Outcome slope_check(SeriesKind kind, const std::vector<std::pair<int, std::pair<double, double>>>& cuts,
                    const std::string& what) {
  auto& L = large_n();
  auto data = table_samples(L.T, kind, 40, 160, 20);
  auto s = make_series(kind, L.w, L.ctx);
  Outcome o;
  std::ostringstream d;
  for (const auto& [order, want] : cuts) {
    auto fit = decay_fit(data, s, -order);
    bool ok = std::fabs(fit.slope - want.first) <= want.second;
    o.pass = o.pass && ok;
    d << (d.tellp() ? "; " : "") << what << order << ": slope " << fixed(fit.slope) << " vs "
      << fixed(want.first) << " +- " << fixed(want.second, 2) << (ok ? "" : " MISSED");
    if (!fit.excluded.empty()) d << " (" << fit.excluded.size() << " points at precision floor)";
  }
  o.detail = d.str();
  return o;
}

Outcome beta_asymptotics() {
  Outcome o = slope_check(SeriesKind::BETA, {{8, {-3.0, 0.15}}, {2, {-4.0 / 3.0, 0.1}}},
                          "truncated after a_");
  // Absent odd powers: least-squares fit of the full basis to exact data.
  auto& L = large_n();
  auto data = table_samples(L.T, SeriesKind::BETA, 40, 160, 10);
  auto s = beta_series(L.w, L.ctx);
  std::vector<std::pair<long, BigReal>> resid;
  for (auto& [n, v] : data) resid.emplace_back(n, v - expansion_eval(s, BigReal(L.ctx, n), 0));
  auto c = fit_power_coefficients(resid, {-1, -2, -3, -4, -5, -6, -7, -8, -9, -10, -11, -12});
  o.notes.push_back("fitted |a_1| = " + sci(abs(c[0])) + " vs |a_2| = " + sci(abs(c[1])) +
                    "; fitted |a_3| = " + sci(abs(c[2])) + " vs |a_4| = " + sci(abs(c[3])));
  if (!o.pass)
    o.notes.push_back(
        "the n^(-4/3) slope is not reached on n in [40,160]: the a_4 n^(-4/3) and a_5 n^(-5/3) terms "
        "have opposite signs and comparable size there, so the local slope of the a_2 remainder is "
        "shallower; the a_8 truncation confirms the coefficients themselves");
  return o;
}

Outcome logd_constants() {
  auto& L = large_n();
  std::vector<std::pair<long, BigReal>> pts = {{120, L.T.logD[120]}, {160, L.T.logD[160]}};
  auto c = fit_logD_constants(pts, L.w, L.ctx, std::pair<long, BigReal>{80, L.T.logD[80]});
  Outcome o;
  o.pass = *c.held_out_error <= lit(L.ctx.bits(), "5e-3");
  BigReal ln4 = ldexp(BigReal::ln2(L.ctx.bits()), 1);
  o.warn = c.conjecture_gap > lit(L.ctx.bits(), "1e-3");
  o.detail = "held-out error at n=80: " + sci(*c.held_out_error) + " (limit 5e-3); c1 = " +
             c.c1.to_string(8) + ", c0 = " + c.c0.to_string(8);
  o.notes.push_back("conjecture c1 = a ln 4 = " + ln4.to_string(8) + ": gap " +
                    c.conjecture_gap.to_string(6) + (o.warn ? " > 1e-3 (reported, not failed)" : " <= 1e-3"));
  if (o.warn) {
    BigReal ln2pi = log(ldexp(BigReal::pi(L.ctx.bits()), 1));
    o.notes.push_back("c1 - (a ln 4 - ln 2pi) = " + sci(c.c1 - (ln4 - ln2pi)));
  }
  return o;
}

Outcome equilibrium() {
  PrecisionContext ctx(256);
  auto w = WeightParams::parse(ctx, "1", "1");
  BigReal n(ctx, 10);
  auto m = solve_support(w, n, ctx);
  BigReal gap = abs(total_mass(m, ctx) - n) / n;
  std::vector<BigReal> xs;
  for (const char* f : {"-0.8", "-0.4", "0", "0.4", "0.8"}) xs.push_back(lit(256, f) * m.b);
  BigReal worst(256);
  for (const auto& d : check_equilibrium(m, xs, ctx)) worst = max(worst, d.relative);
  PrecisionContext low(128);
  BigReal dF = free_energy_n_derivative(w.at_precision(128), BigReal(low, 10), low, 6, 60);
  BigReal A = convert(m.A, 128);
  BigReal drel = abs(dF - A) / abs(A);
  Outcome o;
  o.pass = gap <= lit(256, "1e-30") && worst <= lit(256, "1e-20") && drel <= lit(128, "1e-10");
  o.detail = "normalization gap " + sci(gap) + " (limit 1e-30); constancy " + sci(worst) +
             " x |A| (limit 1e-20); dF/dn vs A relative " + sci(drel) + " (limit 1e-10)";
  return o;
}

}  // namespace

int main() {
  std::printf("acceptance run, %d OpenMP thread(s)\n", parallel_threads());
  criterion(1, "moment dual path, 9 (a,t) pairs, k<=40, 512 bits", 120, moments_dual_path);
  criterion(2, "initial values and R_0 closed form", 0, initial_values);
  criterion(3, "compatibility identities, n<=50, 512 bits", 300, compatibility);
  criterion(4, "difference equations for beta_n, p(n), sigma_n", 0, difference_equations);
  criterion(5, "polynomial ODE and lowering relation, n<=20", 0, polynomial_ode);
  criterion(6, "t-differential relations on the five-point stencil", 600, differential_relations);
  auto t0 = std::chrono::steady_clock::now();
  criterion(7, "beta_n large-n expansion, (a,t)=(1,1), 2048 bits", 0, beta_asymptotics);
  double c7 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c7 > 1200) {
    std::printf("     criterion 7 exceeded its 20 min budget\n");
    failures += 1;
  }
  criterion(8, "p(n) large-n expansion", 0,
            [] { return slope_check(SeriesKind::P, {{4, {-5.0 / 3.0, 0.15}}}, "truncated after b_"); });
  criterion(9, "sigma_n large-n expansion", 0, [] {
    return slope_check(SeriesKind::SIGMA, {{2, {-1.0, 0.15}}}, "truncated after n^(-2/3), order ");
  });
  criterion(10, "ln D_n constants and held-out prediction", 0, logd_constants);
  criterion(11, "equilibrium measure at (a,t,n)=(1,1,10)", 0, equilibrium);
  std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
