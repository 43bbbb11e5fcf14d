#pragma once

#include <cmath>

// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving ~31 significant decimal digits. Used by the special-function kernel
// where power series suffer catastrophic cancellation (K0 and si/ci in the
// mid-range). Only the operations the series need are provided.

namespace singlab::detail {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
};

// Error-free transforms. two_sum is Knuth's branch-free version; two_prod
// relies on fused multiply-add.
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline dd add(dd a, double b) {
  dd s = two_sum(a.hi, b);
  double lo = s.lo + a.lo;
  return quick_two_sum(s.hi, lo);
}

inline dd sub(dd a, dd b) { return add(a, dd{-b.hi, -b.lo}); }
inline dd neg(dd a) { return {-a.hi, -a.lo}; }

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}

inline dd mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return quick_two_sum(p.hi, lo);
}

inline dd div(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = sub(a, mul(b, q1));
  double q2 = r.hi / b.hi;
  r = sub(r, mul(b, q2));
  double q3 = r.hi / b.hi;
  return add(add(dd{q1}, q2), q3);
}

inline dd div(dd a, double b) { return div(a, dd{b}); }

inline bool less_abs(dd a, double b) { return std::fabs(a.hi) < b; }

// exp in double-double: reduce by ln 2, short Taylor series, scale back.
// Reduction constant split so that m*ln2 subtracts exactly to dd accuracy.
inline dd dd_ln2() { return {0.6931471805599453, 2.3190468138462996e-17}; }
inline dd dd_pi() { return {3.141592653589793, 1.2246467991473532e-16}; }
inline dd dd_euler_gamma() {
  return {0.5772156649015329, -4.942915152430645e-18};
}

inline dd dd_exp(dd a) {
  double m = std::round(a.hi / 0.6931471805599453);
  dd r = sub(a, mul(dd_ln2(), m));
  // |r| <= ln2/2; Taylor with term recursion, ~17 terms reach 1e-35
  dd sum{1.0};
  dd term{1.0};
  for (int n = 1; n <= 20; ++n) {
    term = div(mul(term, r), static_cast<double>(n));
    sum = add(sum, term);
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  double scale = std::ldexp(1.0, static_cast<int>(m));
  return {sum.hi * scale, sum.lo * scale};
}

// log via one Newton step off the double-precision seed: y1 = log(a) in
// double, y2 = y1 + a*exp(-y1) - 1 squares the error to ~1e-32.
inline dd dd_log(dd a) {
  double y1 = std::log(a.hi);
  dd e = dd_exp(dd{-y1});
  dd corr = add(mul(a, e), -1.0);
  return add(corr, y1);
}

}  // namespace singlab::detail
