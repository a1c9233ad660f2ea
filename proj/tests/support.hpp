#pragma once

#include <doctest.h>

#include <string>

#include "pjlab/big_real.hpp"

namespace test {

using pjlab::BigReal;

inline BigReal num(long bits, const std::string& s) {
  return BigReal::parse(pjlab::PrecisionContext(bits), s);
}

/// 2^e at the given precision.
inline BigReal pow2(long bits, long e) { return pjlab::ldexp(BigReal(bits, 1), e); }

inline BigReal rel(const BigReal& a, const BigReal& b) { return pjlab::relative_gap(a, b); }

inline std::string show(const BigReal& v) { return v.to_string(12); }

}  // namespace test

namespace doctest {
template <>
struct StringMaker<pjlab::BigReal> {
  static String convert(const pjlab::BigReal& v) { return v.to_string(12).c_str(); }
};
}  // namespace doctest
