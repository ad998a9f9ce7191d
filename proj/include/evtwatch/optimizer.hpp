#ifndef EVTWATCH_OPTIMIZER_HPP_
#define EVTWATCH_OPTIMIZER_HPP_

#include <vector>

#include "evtwatch/evt_core.hpp"
#include "evtwatch/timeseries.hpp"

namespace evtwatch {

// Lattice edges and spacing for the exponent search.  Each axis holds
// epsilon, epsilon + step, ... up to its max.
struct GridSpec {
  double epsilon = 0.05;
  double alpha_max = 5.0;
  double beta_max = 5.0;
  double nu_max = 5.0;
  double step = 0.05;

  // Throws std::invalid_argument unless 0 < epsilon <= each max and step > 0.
  void validate() const;
};

// Values epsilon + k * step for k = 0, 1, ... not exceeding hi.
std::vector<double> axis_values(double lo, double hi, double step);

// Explicit two-axis lattice: (alpha, beta) for the upper bound,
// (alpha, nu) for the lower bound.  Both axes must be sorted ascending.
struct ParamAxes {
  std::vector<double> alpha;
  std::vector<double> shape;

  std::size_t size() const { return alpha.size() * shape.size(); }
};

ParamAxes upper_axes(const GridSpec &grid);
ParamAxes lower_axes(const GridSpec &grid);

struct OptimizedBound {
  double t = 0.0;
  double value = 0.0;
  PowerParams best_params;
  BoundKind kind = BoundKind::upper;
  bool clamped = false;
};

// Raised when no lattice point gives a finite bound.
class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimises the upper bound over an (alpha, beta) lattice.  theta_hat does
// not depend on t, so it is tabulated once and reused across return periods.
// Ties go to the smallest alpha, then the smallest beta.
class UpperBoundSearch {
 public:
  UpperBoundSearch(const ReferenceSample &sample, ParamAxes axes);

  OptimizedBound at(double t) const;
  const ParamAxes &axes() const { return axes_; }

 private:
  ParamAxes axes_;
  std::vector<double> theta_;  // row-major [alpha][beta]
};

// Maximises the lower bound over an (alpha, nu) lattice with fixed q.  Ties
// go to the smallest alpha, then the smallest nu.
class LowerBoundSearch {
 public:
  LowerBoundSearch(const ReferenceSample &sample, ParamAxes axes, double q = kDefaultQ);

  OptimizedBound at(double t) const;
  const ParamAxes &axes() const { return axes_; }

 private:
  ParamAxes axes_;
  double q_;
  std::vector<double> theta_star_;
  std::vector<double> theta_star_q_;
};

OptimizedBound optimize_upper(const ReferenceSample &sample, double t, const GridSpec &grid);
OptimizedBound optimize_upper(const ReferenceSample &sample, double t, const ParamAxes &axes);
OptimizedBound optimize_lower(const ReferenceSample &sample, double t, const GridSpec &grid);
OptimizedBound optimize_lower(const ReferenceSample &sample, double t, const ParamAxes &axes);

}  // namespace evtwatch

#endif  // EVTWATCH_OPTIMIZER_HPP_
