// Test-only reference computations.  These deliberately avoid the library's
// code paths: long double accumulation, literal double loops, and calendar
// rules taken from the ISO 8601 definition rather than std::chrono.
#ifndef EVTWATCH_TESTS_ORACLES_HPP_
#define EVTWATCH_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "evtwatch/evt_core.hpp"
#include "evtwatch/optimizer.hpp"

namespace oracle {

inline long double powl_(long double x, long double e) { return std::pow(x, e); }

// (1/n) sum X(i)^a (i/n)^b, straight from the definition.
inline long double theta(std::vector<double> x, double a, double b) {
  std::sort(x.begin(), x.end());
  const long double n = x.size();
  long double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    s += powl_(x[k], a) * powl_((k + 1) / n, b);
  }
  return s / n;
}

// (1/n) sum X(i)^a (1 - i/(n+1))^(-nu).
inline long double theta_star(std::vector<double> x, double a, double nu) {
  std::sort(x.begin(), x.end());
  const long double n = x.size();
  long double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const long double p = 1.0L - (k + 1) / (n + 1.0L);
    s += powl_(x[k], a) / powl_(p, nu);
  }
  return s / n;
}

inline long double upper(const std::vector<double> &x, double t, double a, double b) {
  const long double th = theta(x, a, b);
  return powl_(t * th / powl_(1.0L - 1.0L / t, b), 1.0L / a);
}

inline long double lower(const std::vector<double> &x, double t, double a, double nu,
                         double q = 2.0) {
  const long double num = theta_star(x, a, nu) -
                          powl_(t, -1.0L + 1.0L / q) * powl_(theta_star(x, q * a, q * nu), 1.0L / q);
  if (num < 0) return 0;
  return powl_(num / (powl_(t, nu) * (1.0L - 1.0L / t)), 1.0L / a);
}

// Literal double loop over ranks i and integration nodes j.
inline long double sigma(std::vector<double> x, double a, double b) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const long double dn = n;
  const long double th = theta(x, a, b);
  long double ss = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    long double integral = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      const long double indicator = i <= j ? 1.0L : 0.0L;
      integral += (indicator - j / dn) * b * powl_(j / dn, b - 1.0L) * powl_(x[j - 1], a);
    }
    integral /= dn;
    const long double term = -powl_(i / dn, b) * powl_(x[i - 1], a) + th - integral;
    ss += term * term;
  }
  return std::sqrt(ss / dn);
}

inline double rel_err(long double got, long double want) {
  const long double scale = std::max(std::fabs(want), 1e-300L);
  return static_cast<double>(std::fabs(got - want) / scale);
}

// Lattice values lo + k*step for the test's own count of points.
inline std::vector<double> lattice(double lo, double hi, double step) {
  std::vector<double> v;
  for (int k = 0;; ++k) {
    const double value = lo + k * step;
    if (value > hi + 1e-9 * step) break;
    v.push_back(value);
  }
  return v;
}

struct Best {
  double value;
  double a;
  double b;
};

// Exhaustive scan through the public single-point estimators.
inline Best rescan_upper(const evtwatch::ReferenceSample &s, double t,
                         const std::vector<double> &as, const std::vector<double> &bs) {
  Best best{std::numeric_limits<double>::infinity(), 0, 0};
  bool found = false;
  for (double a : as) {
    for (double b : bs) {
      const double v = evtwatch::upper_bound(s, t, a, b).value;
      if (!std::isfinite(v)) continue;
      const bool better = !found || v < best.value ||
                          (v == best.value && (a < best.a || (a == best.a && b < best.b)));
      if (better) best = {v, a, b};
      found = true;
    }
  }
  return best;
}

inline Best rescan_lower(const evtwatch::ReferenceSample &s, double t,
                         const std::vector<double> &as, const std::vector<double> &nus) {
  Best best{-std::numeric_limits<double>::infinity(), 0, 0};
  bool found = false;
  for (double a : as) {
    for (double nu : nus) {
      const double v = evtwatch::lower_bound(s, t, a, nu, 2.0).value;
      if (!std::isfinite(v)) continue;
      const bool better = !found || v > best.value ||
                          (v == best.value && (a < best.a || (a == best.a && nu < best.b)));
      if (better) best = {v, a, nu};
      found = true;
    }
  }
  return best;
}

// Day of week for a Gregorian date, 0 = Sunday (Sakamoto).
inline int day_of_week(int y, int m, int d) {
  static const int offsets[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
  if (m < 3) y -= 1;
  return (y + y / 4 - y / 100 + y / 400 + offsets[m - 1] + d) % 7;
}

inline bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

// ISO rule: 53 weeks iff the year starts on a Thursday, or on a Wednesday in
// a leap year.
inline int iso_weeks(int y) {
  const int jan1 = day_of_week(y, 1, 1);
  return (jan1 == 4 || (leap(y) && jan1 == 3)) ? 53 : 52;
}

}  // namespace oracle

#endif  // EVTWATCH_TESTS_ORACLES_HPP_
