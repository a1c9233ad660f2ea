#include "pjlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pjlab {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_parallel_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

BigReal positive_infinity(const PrecisionContext& ctx) {
  BigReal r(ctx);
  mpfr_set_inf(r.get(), 1);
  return r;
}

BigReal negative_infinity(const PrecisionContext& ctx) {
  BigReal r(ctx);
  mpfr_set_inf(r.get(), -1);
  return r;
}

namespace {

enum class MapKind { Finite, HalfLine, WholeLine };

// Abscissa data for the normalized interval: [-1,1], [0,inf) or (-inf,inf).
struct Node {
  BigReal xi;
  BigReal gap_lo;
  BigReal gap_hi;
  BigReal weight;
};

Node make_node(MapKind kind, long bits, long k, int level) {
  BigReal s = ldexp(BigReal(bits, k), -level);
  BigReal half_pi = ldexp(BigReal::pi(bits), -1);
  switch (kind) {
    case MapKind::Finite: {
      BigReal u = half_pi * sinh(s);
      // E = exp(-2|u|); gaps 2E/(1+E) and 2/(1+E) never round to zero.
      BigReal e = exp(ldexp(-abs(u), 1));
      BigReal one_plus = e + 1;
      BigReal near = ldexp(e, 1) / one_plus;
      BigReal far = 2 / one_plus;
      BigReal xi = (1 - e) / one_plus;
      BigReal w = half_pi * cosh(s) * ldexp(e, 2) / square(one_plus);
      if (u.sign() >= 0) return {std::move(xi), std::move(far), std::move(near), std::move(w)};
      return {-xi, std::move(near), std::move(far), std::move(w)};
    }
    case MapKind::HalfLine: {
      BigReal emin = exp(-s);
      BigReal phi = exp(s - emin);
      BigReal w = phi * (emin + 1);
      BigReal inf(bits);
      mpfr_set_inf(inf.get(), 1);
      return {phi, phi, std::move(inf), std::move(w)};
    }
    case MapKind::WholeLine: {
      BigReal u = half_pi * sinh(s);
      BigReal w = half_pi * cosh(s) * cosh(u);
      BigReal inf(bits);
      mpfr_set_inf(inf.get(), 1);
      return {sinh(u), inf, inf, std::move(w)};
    }
  }
  throw InvariantViolation("unknown quadrature map");
}

// Nodes of one refinement level over |s| <= range: all integers at level 0,
// odd multiples of 2^-level otherwise. k(i) = first_k + stride * i.
struct LevelNodes {
  long range;
  long first_k;
  long stride;
  std::vector<Node> nodes;
};

class NodeCache {
 public:
  static NodeCache& instance() {
    static NodeCache cache;
    return cache;
  }

  std::shared_ptr<const LevelNodes> get(MapKind kind, long bits, int level, long range) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = tables_[{kind, bits}];
    if (slot.range < range) {
      slot.range = range;
      slot.levels.clear();
    }
    if (static_cast<int>(slot.levels.size()) <= level) slot.levels.resize(level + 1);
    if (!slot.levels[level]) slot.levels[level] = build(kind, bits, level, slot.range);
    return slot.levels[level];
  }

 private:
  struct Table {
    long range = 0;
    std::vector<std::shared_ptr<const LevelNodes>> levels;
  };

  static std::shared_ptr<const LevelNodes> build(MapKind kind, long bits, int level, long range) {
    auto out = std::make_shared<LevelNodes>();
    out->range = range;
    long count;
    if (level == 0) {
      out->first_k = -range;
      out->stride = 1;
      count = 2 * range + 1;
    } else {
      long span = range << level;
      out->first_k = -(span - 1);
      out->stride = 2;
      count = span;
    }
    out->nodes.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i)
      out->nodes.push_back(make_node(kind, bits, out->first_k + out->stride * i, level));
    return out;
  }

  std::mutex mutex_;
  std::map<std::tuple<MapKind, long>, Table> tables_;
};

long initial_range(MapKind kind, long bits) {
  double b = 2.0 * static_cast<double>(bits) * std::log(2.0) + 20.0;
  if (kind == MapKind::HalfLine) return static_cast<long>(std::ceil(std::log(b)));
  return static_cast<long>(std::ceil(std::log(b * 2.0 / M_PI)));
}

constexpr long kMaxRange = 64;
constexpr int kMinLevel = 3;

// Maps a normalized node onto the caller's interval.
class IntervalMap {
 public:
  IntervalMap(const BigReal& lo, const BigReal& hi, const PrecisionContext& ctx)
      : lo_(lo), hi_(hi), c_(ctx), d_(ctx) {
    bool lo_inf = mpfr_inf_p(lo.get()) != 0;
    bool hi_inf = mpfr_inf_p(hi.get()) != 0;
    if (lo_inf && hi_inf) {
      kind_ = MapKind::WholeLine;
    } else if (lo_inf) {
      kind_ = MapKind::HalfLine;
      mirrored_ = true;
    } else if (hi_inf) {
      kind_ = MapKind::HalfLine;
    } else {
      kind_ = MapKind::Finite;
      c_ = ldexp(lo + hi, -1);
      d_ = ldexp(hi - lo, -1);
    }
  }

  MapKind kind() const { return kind_; }

  template <class Body>
  void at(const Node& n, Body&& body) const {
    switch (kind_) {
      case MapKind::Finite: {
        BigReal x = c_ + d_ * n.xi;
        BigReal from_lo = d_ * n.gap_lo;
        BigReal from_hi = d_ * n.gap_hi;
        body(Abscissa{x, from_lo, from_hi}, d_ * n.weight);
        return;
      }
      case MapKind::HalfLine: {
        if (mirrored_) {
          BigReal x = hi_ - n.xi;
          body(Abscissa{x, n.gap_hi, n.gap_lo}, n.weight);
        } else {
          BigReal x = lo_ + n.xi;
          body(Abscissa{x, n.gap_lo, n.gap_hi}, n.weight);
        }
        return;
      }
      case MapKind::WholeLine:
        body(Abscissa{n.xi, n.gap_lo, n.gap_hi}, n.weight);
        return;
    }
  }

 private:
  const BigReal& lo_;
  const BigReal& hi_;
  MapKind kind_;
  bool mirrored_ = false;
  BigReal c_;
  BigReal d_;
};

using Terms = std::vector<std::vector<BigReal>>;

// Evaluates weighted integrand values for nodes [begin, end) of a level.
void evaluate_terms(const BatchIntegrand& f, std::size_t count, const IntervalMap& map,
                    const LevelNodes& level, long begin, long end, Terms& out,
                    const PrecisionContext& ctx, Exec exec) {
  out.assign(static_cast<size_t>(std::max(0L, end - begin)), {});
  ExceptionSlot slot;
  auto body = [&](long i) {
    slot.run([&] {
      std::vector<BigReal> vals(count, BigReal(ctx));
      map.at(level.nodes[static_cast<size_t>(i)], [&](const Abscissa& a, const BigReal& w) {
        f(a, vals);
        for (auto& v : vals) {
          if (mpfr_nan_p(v.get()))
            throw DomainError("integrand is NaN at x = " + a.x.to_string(20));
          v *= w;
        }
      });
      out[static_cast<size_t>(i - begin)] = std::move(vals);
    });
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = begin; i < end; ++i) body(i);
  } else {
    for (long i = begin; i < end; ++i) body(i);
  }
  slot.rethrow();
}

bool negligible(const std::vector<BigReal>& term, const std::vector<BigReal>& peak, long bits) {
  for (size_t c = 0; c < term.size(); ++c) {
    if (term[c].is_zero()) continue;
    if (peak[c].is_zero()) return false;
    if (term[c].exponent() > peak[c].exponent() - bits - 20) return false;
  }
  return true;
}

void track_peak(const std::vector<BigReal>& term, std::vector<BigReal>& peak) {
  for (size_t c = 0; c < term.size(); ++c)
    if (compare(abs(term[c]), peak[c]) > 0) peak[c] = abs(term[c]);
}

}  // namespace

std::vector<BigReal> tanh_sinh_integrate_batch(const BatchIntegrand& f, std::size_t count,
                                               const BigReal& lo, const BigReal& hi,
                                               const PrecisionContext& ctx,
                                               const QuadOptions& opt, QuadStats* stats) {
  const long bits = ctx.bits();
  if (lo.bits() != bits || hi.bits() != bits)
    throw ContextMismatch("integration limits do not match the context precision");
  if (mpfr_nan_p(lo.get()) || mpfr_nan_p(hi.get())) throw DomainError("NaN integration limit");
  if (lo == hi) return std::vector<BigReal>(count, BigReal(ctx));
  if (lo > hi) throw DomainError("integration limits out of order");

  IntervalMap map(lo, hi, ctx);
  auto& cache = NodeCache::instance();
  const int max_level = opt.max_level.value_or(ctx.quad_level());
  const long tol_bits = opt.tolerance_bits.value_or((6 * bits + 9) / 10);

  // Level 0 fixes the truncation of the s-range: extend each side until the
  // edge term is negligible against the largest term seen.
  long left = initial_range(map.kind(), bits);
  long right = left;
  std::map<long, std::vector<BigReal>> level0;
  std::vector<BigReal> peak(count, BigReal(ctx));
  std::size_t evaluations = 0;
  auto eval_span = [&](long k_lo, long k_hi) {
    long need = std::max(-k_lo, k_hi);
    auto lv = cache.get(map.kind(), bits, 0, need);
    Terms t;
    evaluate_terms(f, count, map, *lv, k_lo - lv->first_k, k_hi - lv->first_k + 1, t, ctx, opt.exec);
    evaluations += t.size();
    for (long k = k_lo; k <= k_hi; ++k) {
      auto& v = t[static_cast<size_t>(k - k_lo)];
      track_peak(v, peak);
      level0[k] = std::move(v);
    }
  };
  eval_span(-left, right);
  while (!negligible(level0.at(-left), peak, bits)) {
    if (++left > kMaxRange) throw PrecisionExhausted("quadrature tail does not decay (lower end)");
    eval_span(-left, -left);
  }
  while (!negligible(level0.at(right), peak, bits)) {
    if (++right > kMaxRange) throw PrecisionExhausted("quadrature tail does not decay (upper end)");
    eval_span(right, right);
  }

  std::vector<BigReal> raw(count, BigReal(ctx));
  for (auto& [k, v] : level0)
    for (size_t c = 0; c < count; ++c) raw[c] += v[c];
  std::vector<BigReal> prev = raw;

  for (int level = 1; level <= max_level; ++level) {
    auto lv = cache.get(map.kind(), bits, level, std::max(left, right));
    long lo_k = -(left << level);
    long hi_k = right << level;
    long begin = (lo_k + 1 - lv->first_k + lv->stride - 1) / lv->stride;
    long end = (hi_k - 1 - lv->first_k) / lv->stride + 1;
    Terms t;
    evaluate_terms(f, count, map, *lv, begin, end, t, ctx, opt.exec);
    evaluations += t.size();
    for (auto& v : t)
      for (size_t c = 0; c < count; ++c) raw[c] += v[c];

    std::vector<BigReal> cur(count, BigReal(ctx));
    bool converged = level >= kMinLevel;
    for (size_t c = 0; c < count; ++c) {
      cur[c] = ldexp(raw[c], -level);
      if (!converged) continue;
      BigReal diff = abs(cur[c] - prev[c]);
      if (diff.is_zero()) continue;
      if (cur[c].is_zero() || diff.exponent() > cur[c].exponent() - tol_bits) converged = false;
    }
    if (converged) {
      if (stats) *stats = {level, evaluations};
      return cur;
    }
    prev = std::move(cur);
  }
  throw PrecisionExhausted("tanh-sinh quadrature did not converge by level " +
                           std::to_string(max_level) + " at " + std::to_string(bits) + " bits");
}

BigReal tanh_sinh_integrate(const Integrand& f, const BigReal& lo, const BigReal& hi,
                            const PrecisionContext& ctx, const QuadOptions& opt,
                            QuadStats* stats) {
  auto batch = [&f](const Abscissa& a, std::vector<BigReal>& out) { out[0] = f(a); };
  return std::move(tanh_sinh_integrate_batch(batch, 1, lo, hi, ctx, opt, stats)[0]);
}

}  // namespace pjlab
