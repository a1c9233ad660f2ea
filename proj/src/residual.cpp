#include "pjlab/residual.hpp"

#include <algorithm>
#include <tuple>

namespace pjlab {

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::S1: return "S1";
    case Relation::S21: return "S21";
    case Relation::S22: return "S22";
    case Relation::S2P1: return "S2P1";
    case Relation::S2P2: return "S2P2";
    case Relation::S2P3: return "S2P3";
    case Relation::BTD: return "BTD";
    case Relation::PND: return "PND";
    case Relation::SND: return "SND";
    case Relation::POLY_ODE: return "POLY_ODE";
    case Relation::LOWERING: return "LOWERING";
    case Relation::EQ1: return "EQ1";
    case Relation::PNT: return "PNT";
    case Relation::EQ2: return "EQ2";
    case Relation::RIC1: return "RIC1";
    case Relation::RIC2: return "RIC2";
    case Relation::ODE_R: return "ODE_R";
    case Relation::ODE_SMALL_R: return "ODE_r";
    case Relation::PV: return "PV";
    case Relation::SIGMA_ODE: return "SIGMA_ODE";
    case Relation::SIGMA_DEF: return "SIGMA_DEF";
  }
  return "?";
}

std::string ResidualReport::label() const {
  std::string s(relation_name(relation));
  if (z) s += "[z=" + z->to_string(6) + "]";
  return s;
}

BigReal default_tolerance(long bits) { return ldexp(BigReal(bits, 1), -(bits / 4)); }

ResidualReport TermSum::report(Relation rel, int n, const WeightParams& params,
                               const BigReal& tolerance, Normalization norm) const {
  BigReal scale = norm == Normalization::SumOfMagnitudes ? magnitude_ : largest_;
  BigReal relative = scale.is_zero() ? abs(sum_) : abs(sum_) / scale;
  bool pass = !(relative > tolerance);
  return ResidualReport{rel, n, params, sum_.bits(), sum_, std::move(scale),
                        std::move(relative), pass, std::nullopt};
}

void sort_reports(std::vector<ResidualReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const ResidualReport& a, const ResidualReport& b) {
    if (a.relation != b.relation) return a.relation < b.relation;
    if (a.n != b.n) return a.n < b.n;
    if (a.params.t() != b.params.t()) return a.params.t() < b.params.t();
    if (a.z.has_value() != b.z.has_value()) return !a.z.has_value();
    if (a.z && *a.z != *b.z) return *a.z < *b.z;
    return false;
  });
}

}  // namespace pjlab
