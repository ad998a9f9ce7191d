#include "evtwatch/evt_core.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace evtwatch {

namespace {

void require_nonempty(const ReferenceSample &sample) {
  if (sample.empty()) throw std::invalid_argument("empty reference sample");
}

void require_positive(double value, const char *name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite and > 0");
  }
}

void require_return_period(double t) {
  if (!(t > 1.0) || !std::isfinite(t)) {
    throw std::invalid_argument("return period t must be finite and > 1");
  }
}

}  // namespace

double rank_position(std::size_t i, std::size_t n) {
  return static_cast<double>(i) / static_cast<double>(n);
}

double plotting_position(std::size_t i, std::size_t n) {
  return 1.0 - static_cast<double>(i) / static_cast<double>(n + 1);
}

double theta_hat(const ReferenceSample &sample, double alpha, double beta) {
  require_nonempty(sample);
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  const auto &x = sample.values();
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += std::pow(x[i - 1], alpha) * std::pow(rank_position(i, n), beta);
  }
  return sum / static_cast<double>(n);
}

double theta_star_hat(const ReferenceSample &sample, double alpha, double nu) {
  require_nonempty(sample);
  require_positive(alpha, "alpha");
  require_positive(nu, "nu");
  const auto &x = sample.values();
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += std::pow(x[i - 1], alpha) * std::pow(plotting_position(i, n), -nu);
  }
  return sum / static_cast<double>(n);
}

double upper_bound_from_theta(double theta, double t, double alpha, double beta) {
  return std::pow(t * theta / std::pow(1.0 - 1.0 / t, beta), 1.0 / alpha);
}

LowerBoundValue lower_bound_from_theta(double theta_star, double theta_star_q, double t,
                                       double alpha, double nu, double q) {
  const double numerator =
      theta_star - std::pow(t, -1.0 + 1.0 / q) * std::pow(theta_star_q, 1.0 / q);
  if (!(numerator >= 0.0)) return {0.0, true};
  const double denominator = std::pow(t, nu) * (1.0 - 1.0 / t);
  return {std::pow(numerator / denominator, 1.0 / alpha), false};
}

BoundEstimate upper_bound(const ReferenceSample &sample, double t, double alpha,
                          double beta) {
  require_return_period(t);
  const double theta = theta_hat(sample, alpha, beta);
  BoundEstimate est;
  est.t = t;
  est.kind = BoundKind::upper;
  est.params = PowerParams{alpha, beta, 1.0, kDefaultQ};
  est.value = upper_bound_from_theta(theta, t, alpha, beta);
  return est;
}

BoundEstimate lower_bound(const ReferenceSample &sample, double t, double alpha, double nu,
                          double q) {
  require_return_period(t);
  if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("q must be > 1");
  const double theta_star = theta_star_hat(sample, alpha, nu);
  const double theta_star_q = theta_star_hat(sample, q * alpha, q * nu);
  const LowerBoundValue lb = lower_bound_from_theta(theta_star, theta_star_q, t, alpha, nu, q);
  BoundEstimate est;
  est.t = t;
  est.kind = BoundKind::lower;
  est.params = PowerParams{alpha, 1.0, nu, q};
  est.value = lb.value;
  est.clamped = lb.clamped;
  return est;
}

double sigma_hat(const ReferenceSample &sample, double alpha, double beta) {
  if (sample.size() < 2) {
    throw std::invalid_argument("sigma_hat needs at least 2 observations");
  }
  const double theta = theta_hat(sample, alpha, beta);
  const auto &x = sample.values();
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);

  // g_j = v'(j/n) u(X(j)); the integral term for rank i is
  // (1/n) (sum_{j >= i} g_j - sum_j (j/n) g_j).
  std::vector<double> u(n);
  std::vector<double> g(n);
  double weighted = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double r = rank_position(j, n);
    u[j - 1] = std::pow(x[j - 1], alpha);
    g[j - 1] = beta * std::pow(r, beta - 1.0) * u[j - 1];
    weighted += r * g[j - 1];
  }
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j >= 1; --j) suffix[j - 1] = suffix[j] + g[j - 1];

  double sum_sq = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double integral = (suffix[i - 1] - weighted) / dn;
    const double term =
        -std::pow(rank_position(i, n), beta) * u[i - 1] + theta - integral;
    sum_sq += term * term;
  }
  return std::sqrt(sum_sq / dn);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ConfidenceInterval ci_upper_bound(const ReferenceSample &sample, double t, double alpha,
                                  double beta, double level) {
  require_return_period(t);
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  const double sigma = sigma_hat(sample, alpha, beta);
  const double theta = theta_hat(sample, alpha, beta);
  const double centre = upper_bound_from_theta(theta, t, alpha, beta);

  double half_width = 0.0;
  if (sigma > 0.0) {
    const double v_tail = std::pow(1.0 - 1.0 / t, beta);
    const double argument = t * theta / v_tail;
    const double inverse_slope = std::pow(argument, 1.0 / alpha - 1.0) / alpha;
    const double z = normal_quantile(0.5 + level / 2.0);
    half_width = z * t * sigma /
                 (std::sqrt(static_cast<double>(sample.size())) * v_tail) * inverse_slope;
  }
  return {std::max(0.0, centre - half_width), centre + half_width, level};
}

}  // namespace evtwatch
