#include "evtwatch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evtwatch {

namespace {

void check_axes(const ParamAxes &axes) {
  if (axes.alpha.empty() || axes.shape.empty()) {
    throw std::invalid_argument("parameter lattice is empty");
  }
  for (const auto *axis : {&axes.alpha, &axes.shape}) {
    for (std::size_t k = 0; k < axis->size(); ++k) {
      if (!((*axis)[k] > 0.0) || !std::isfinite((*axis)[k])) {
        throw std::invalid_argument("lattice exponents must be finite and > 0");
      }
      if (k > 0 && !((*axis)[k - 1] < (*axis)[k])) {
        throw std::invalid_argument("lattice axes must be strictly increasing");
      }
    }
  }
}

void check_t(double t) {
  if (!(t > 1.0) || !std::isfinite(t)) {
    throw std::invalid_argument("return period t must be finite and > 1");
  }
}

// Powers of each order statistic / position for every exponent on an axis,
// row-major [exponent][rank].
std::vector<double> power_table(const std::vector<double> &bases,
                                const std::vector<double> &exponents, double sign) {
  std::vector<double> table(bases.size() * exponents.size());
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    const double exponent = sign * exponents[e];
    for (std::size_t i = 0; i < bases.size(); ++i) {
      table[e * bases.size() + i] = std::pow(bases[i], exponent);
    }
  }
  return table;
}

// Same arithmetic and summation order as theta_hat / theta_star_hat.
std::vector<double> functional_table(const std::vector<double> &left, std::size_t left_rows,
                                     const std::vector<double> &right,
                                     std::size_t right_rows, std::size_t n) {
  std::vector<double> out(left_rows * right_rows);
  for (std::size_t a = 0; a < left_rows; ++a) {
    const double *lhs = left.data() + a * n;
    for (std::size_t b = 0; b < right_rows; ++b) {
      const double *rhs = right.data() + b * n;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += lhs[i] * rhs[i];
      out[a * right_rows + b] = sum / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("grid epsilon must be > 0");
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (!(alpha_max >= epsilon) || !(beta_max >= epsilon) || !(nu_max >= epsilon)) {
    throw std::invalid_argument("grid maxima must be >= epsilon");
  }
  for (double hi : {alpha_max, beta_max, nu_max}) {
    if (!std::isfinite(hi)) throw std::invalid_argument("grid maxima must be finite");
  }
}

std::vector<double> axis_values(double lo, double hi, double step) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    values.push_back(lo + static_cast<double>(k) * step);
  }
  return values;
}

ParamAxes upper_axes(const GridSpec &grid) {
  grid.validate();
  return {axis_values(grid.epsilon, grid.alpha_max, grid.step),
          axis_values(grid.epsilon, grid.beta_max, grid.step)};
}

ParamAxes lower_axes(const GridSpec &grid) {
  grid.validate();
  return {axis_values(grid.epsilon, grid.alpha_max, grid.step),
          axis_values(grid.epsilon, grid.nu_max, grid.step)};
}

UpperBoundSearch::UpperBoundSearch(const ReferenceSample &sample, ParamAxes axes)
    : axes_(std::move(axes)) {
  check_axes(axes_);
  if (sample.empty()) throw std::invalid_argument("empty reference sample");
  const std::size_t n = sample.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 1; i <= n; ++i) ranks[i - 1] = rank_position(i, n);
  const auto u = power_table(sample.values(), axes_.alpha, 1.0);
  const auto v = power_table(ranks, axes_.shape, 1.0);
  theta_ = functional_table(u, axes_.alpha.size(), v, axes_.shape.size(), n);
}

OptimizedBound UpperBoundSearch::at(double t) const {
  check_t(t);
  const std::size_t nb = axes_.shape.size();
  // Same expressions as upper_bound_from_theta, split so that the outer
  // 1/alpha power is only taken near each row's minimum.  x^(1/alpha) is
  // increasing, so candidates more than 1e-12 above the row minimum cannot
  // reach it; the survivors are evaluated in full for exact ties.
  std::vector<double> tail(nb);
  for (std::size_t b = 0; b < nb; ++b) tail[b] = std::pow(1.0 - 1.0 / t, axes_.shape[b]);
  std::vector<double> inner(nb);

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_a = 0, best_b = 0;
  bool found = false;
  for (std::size_t a = 0; a < axes_.alpha.size(); ++a) {
    double row_min = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      inner[b] = t * theta_[a * nb + b] / tail[b];
      if (inner[b] < row_min) row_min = inner[b];
    }
    if (!std::isfinite(row_min)) continue;
    const double cutoff = row_min + row_min * 1e-12;
    for (std::size_t b = 0; b < nb; ++b) {
      if (!(inner[b] <= cutoff)) continue;
      const double value = std::pow(inner[b], 1.0 / axes_.alpha[a]);
      if (std::isfinite(value) && (!found || value < best)) {
        best = value;
        best_a = a;
        best_b = b;
        found = true;
      }
    }
  }
  if (!found) {
    throw OptimizationError("no finite upper bound on the lattice at t=" + std::to_string(t));
  }
  OptimizedBound out;
  out.t = t;
  out.value = best;
  out.kind = BoundKind::upper;
  out.best_params = PowerParams{axes_.alpha[best_a], axes_.shape[best_b], 1.0, kDefaultQ};
  return out;
}

LowerBoundSearch::LowerBoundSearch(const ReferenceSample &sample, ParamAxes axes, double q)
    : axes_(std::move(axes)), q_(q) {
  check_axes(axes_);
  if (sample.empty()) throw std::invalid_argument("empty reference sample");
  if (!(q_ > 1.0) || !std::isfinite(q_)) throw std::invalid_argument("q must be > 1");
  const std::size_t n = sample.size();
  std::vector<double> positions(n);
  for (std::size_t i = 1; i <= n; ++i) positions[i - 1] = plotting_position(i, n);

  std::vector<double> alpha_q(axes_.alpha.size());
  std::vector<double> nu_q(axes_.shape.size());
  for (std::size_t a = 0; a < alpha_q.size(); ++a) alpha_q[a] = q_ * axes_.alpha[a];
  for (std::size_t b = 0; b < nu_q.size(); ++b) nu_q[b] = q_ * axes_.shape[b];

  const std::size_t na = axes_.alpha.size(), nb = axes_.shape.size();
  theta_star_ = functional_table(power_table(sample.values(), axes_.alpha, 1.0), na,
                                 power_table(positions, axes_.shape, -1.0), nb, n);
  theta_star_q_ = functional_table(power_table(sample.values(), alpha_q, 1.0), na,
                                   power_table(positions, nu_q, -1.0), nb, n);
}

OptimizedBound LowerBoundSearch::at(double t) const {
  check_t(t);
  const std::size_t nb = axes_.shape.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_a = 0, best_b = 0;
  bool best_clamped = false;
  bool found = false;
  for (std::size_t a = 0; a < axes_.alpha.size(); ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      const LowerBoundValue lb =
          lower_bound_from_theta(theta_star_[a * nb + b], theta_star_q_[a * nb + b], t,
                                 axes_.alpha[a], axes_.shape[b], q_);
      if (!std::isfinite(lb.value)) continue;
      if (!found || lb.value > best) {
        best = lb.value;
        best_a = a;
        best_b = b;
        best_clamped = lb.clamped;
        found = true;
      }
    }
  }
  if (!found) {
    throw OptimizationError("no finite lower bound on the lattice at t=" + std::to_string(t));
  }
  OptimizedBound out;
  out.t = t;
  out.value = best;
  out.kind = BoundKind::lower;
  out.clamped = best_clamped;
  out.best_params = PowerParams{axes_.alpha[best_a], 1.0, axes_.shape[best_b], q_};
  return out;
}

OptimizedBound optimize_upper(const ReferenceSample &sample, double t, const GridSpec &grid) {
  return optimize_upper(sample, t, upper_axes(grid));
}

OptimizedBound optimize_upper(const ReferenceSample &sample, double t,
                              const ParamAxes &axes) {
  return UpperBoundSearch(sample, axes).at(t);
}

OptimizedBound optimize_lower(const ReferenceSample &sample, double t, const GridSpec &grid) {
  return optimize_lower(sample, t, lower_axes(grid));
}

OptimizedBound optimize_lower(const ReferenceSample &sample, double t,
                              const ParamAxes &axes) {
  return LowerBoundSearch(sample, axes).at(t);
}

}  // namespace evtwatch
