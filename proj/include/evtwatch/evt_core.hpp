#ifndef EVTWATCH_EVT_CORE_HPP_
#define EVTWATCH_EVT_CORE_HPP_

#include <cstddef>

#include "evtwatch/timeseries.hpp"

// Empirical return-level bounds over the power-function family
//
//   u(x) = x^alpha,  v(x) = x^beta,  w(x) = x^(-nu),
//
// built on the order statistics X(1) <= ... <= X(n) of a reference sample.
//
// Upper bound on the (1 - 1/t)-quantile:
//   theta_hat    = (1/n) sum_i X(i)^alpha (i/n)^beta
//   b_t          = ( t theta_hat / (1 - 1/t)^beta )^(1/alpha)
//
// Lower bound, using plotting positions p_i = 1 - i/(n+1) in place of
// 1 - i/n so that w stays finite at i = n:
//   theta_star   = (1/n) sum_i X(i)^alpha p_i^(-nu)
//   l_t          = ( (theta_star(a, nu) - t^(-1+1/q) theta_star(q a, q nu)^(1/q))
//                    / (t^nu (1 - 1/t)) )^(1/alpha),   clamped at 0.
namespace evtwatch {

struct PowerParams {
  double alpha = 1.0;
  double beta = 1.0;
  double nu = 1.0;
  double q = 2.0;

  friend bool operator==(const PowerParams &, const PowerParams &) = default;
};

enum class BoundKind { upper, lower };

struct BoundEstimate {
  double t = 0.0;
  double value = 0.0;
  BoundKind kind = BoundKind::upper;
  PowerParams params;
  // Lower bound only: the numerator was negative and the value forced to 0.
  bool clamped = false;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

inline constexpr double kDefaultQ = 2.0;

// Rank position i/n used by v, and the plotting position 1 - i/(n+1) used by
// w.  Ranks are 1-based.
double rank_position(std::size_t i, std::size_t n);
double plotting_position(std::size_t i, std::size_t n);

double theta_hat(const ReferenceSample &sample, double alpha, double beta);
double theta_star_hat(const ReferenceSample &sample, double alpha, double nu);

// Bound formulas given precomputed functionals.  These are the exact
// arithmetic used by upper_bound/lower_bound, exposed so that a lattice
// search over cached functionals reproduces them bit for bit.
double upper_bound_from_theta(double theta, double t, double alpha, double beta);

struct LowerBoundValue {
  double value = 0.0;
  bool clamped = false;
};
LowerBoundValue lower_bound_from_theta(double theta_star, double theta_star_q, double t,
                                       double alpha, double nu, double q);

// Throws std::invalid_argument for t <= 1, nonpositive exponents, q <= 1
// or an empty sample.
BoundEstimate upper_bound(const ReferenceSample &sample, double t, double alpha,
                          double beta);
BoundEstimate lower_bound(const ReferenceSample &sample, double t, double alpha, double nu,
                          double q = kDefaultQ);

// Plug-in estimate of the asymptotic standard deviation of theta_hat: the
// root mean square over observations of the influence term
//
//   -v(i/n) u(X(i)) + theta_hat - (1/n) sum_j (1{i <= j} - j/n) v'(j/n) u(X(j)).
//
// Requires n >= 2.
double sigma_hat(const ReferenceSample &sample, double alpha, double beta);

// Standard normal quantile of order p.
double normal_quantile(double p);

// Delta-method interval for the upper bound at confidence `level`:
//   b_t +/- z t sigma_hat / (sqrt(n) v(1 - 1/t)) (u^-1)'(t theta_hat / v(1 - 1/t))
// with z the (1 + level)/2 normal quantile.  The lower end is clamped at 0.
ConfidenceInterval ci_upper_bound(const ReferenceSample &sample, double t, double alpha,
                                  double beta, double level);

}  // namespace evtwatch

#endif  // EVTWATCH_EVT_CORE_HPP_
