#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <string>

namespace gw {

// Exact arithmetic backend. All library operations are templated on the
// scalar type S, which is either `Rational` (exact, arbitrary precision)
// or `double` (fast, for long decay sweeps).
using Rational = mpq_class;

inline Rational make_rational(long long num, long long den) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

struct Tolerance {
  double epsilon = 1e-9;
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_ratio(long long num, long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static bool equal(double a, double b, const Tolerance& tol) {
    return std::fabs(a - b) <= tol.epsilon;
  }
  static std::string to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_ratio(long long num, long long den) {
    return make_rational(num, den);
  }
  static Rational from_double(double x) { return Rational(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static bool equal(const Rational& a, const Rational& b, const Tolerance&) {
    return a == b;
  }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

}  // namespace gw
