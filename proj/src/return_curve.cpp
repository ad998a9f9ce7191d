#include "evtwatch/return_curve.hpp"

#include <algorithm>
#include <iomanip>
#include <iterator>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evtwatch {

namespace {

void check_range(int t_min, int t_max) {
  if (t_min < 2 || t_max <= t_min) {
    throw std::invalid_argument("return period range must satisfy 2 <= t_min < t_max");
  }
}

}  // namespace

const char *to_string(Clamp clamp) {
  switch (clamp) {
    case Clamp::none: return "none";
    case Clamp::below_min: return "below_min";
    case Clamp::above_max: return "above_max";
  }
  return "none";
}

ReturnCurve build_curve(const ReferenceSample &sample, int t_min, int t_max,
                        const GridSpec &grid, double ci_level) {
  return build_curve(sample, t_min, t_max, upper_axes(grid), ci_level);
}

ReturnCurve build_curve(const ReferenceSample &sample, int t_min, int t_max,
                        const ParamAxes &axes, double ci_level) {
  check_range(t_min, t_max);
  const UpperBoundSearch search(sample, axes);
  ReturnCurve curve;
  curve.t_min = t_min;
  curve.t_max = t_max;
  curve.points.reserve(static_cast<std::size_t>(t_max - t_min + 1));
  for (int t = t_min; t <= t_max; ++t) {
    const OptimizedBound best = search.at(t);
    CurvePoint point;
    point.t = t;
    point.value = best.value;
    point.params = best.best_params;
    if (sample.size() >= 2) {
      point.ci = ci_upper_bound(sample, t, best.best_params.alpha, best.best_params.beta,
                                ci_level);
    } else {
      point.ci = {best.value, best.value, ci_level};
    }
    curve.points.push_back(point);
  }
  return curve;
}

ReturnCurve monotone_envelope(ReturnCurve curve) {
  double running = -std::numeric_limits<double>::infinity();
  for (CurvePoint &p : curve.points) {
    running = std::max(running, p.value);
    p.value = running;
  }
  curve.envelope_applied = true;
  return curve;
}

ReturnPeriodAssignment assign_return_period(const ReturnCurve &curve, double x) {
  if (!curve.envelope_applied) {
    throw std::logic_error("assign_return_period needs an enveloped curve");
  }
  if (curve.points.empty()) throw std::logic_error("empty return curve");
  if (x < curve.points.front().value) return {curve.t_min - 1, Clamp::below_min};
  if (x > curve.points.back().value) return {curve.t_max, Clamp::above_max};
  // First point strictly above x; the one before it is the largest t with
  // value <= x.
  const auto it = std::upper_bound(
      curve.points.begin(), curve.points.end(), x,
      [](double v, const CurvePoint &p) { return v < p.value; });
  return {std::prev(it)->t, Clamp::none};
}

std::vector<LowerCurvePoint> build_lower_curve(const ReferenceSample &sample, int t_min,
                                               int t_max, const GridSpec &grid) {
  check_range(t_min, t_max);
  const LowerBoundSearch search(sample, lower_axes(grid));
  std::vector<LowerCurvePoint> out;
  for (int t = t_min; t <= t_max; ++t) {
    const OptimizedBound best = search.at(t);
    out.push_back({t, best.value, best.best_params, best.clamped});
  }
  return out;
}

void write_curve_csv(std::ostream &out, const ReturnCurve &curve) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "t,b_hat,ci_lo,ci_hi,alpha,beta\n";
  for (const CurvePoint &p : curve.points) {
    out << p.t << ',' << p.value << ',' << p.ci.lower << ',' << p.ci.upper << ','
        << p.params.alpha << ',' << p.params.beta << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_lower_curve_csv(std::ostream &out, const std::vector<LowerCurvePoint> &curve) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "t,l_hat,alpha,nu,clamped\n";
  for (const LowerCurvePoint &p : curve) {
    out << p.t << ',' << p.value << ',' << p.params.alpha << ',' << p.params.nu << ','
        << (p.clamped ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

nlohmann::json curve_to_json(const ReturnCurve &curve) {
  nlohmann::json points = nlohmann::json::array();
  for (const CurvePoint &p : curve.points) {
    points.push_back({{"t", p.t},
                      {"b_hat", p.value},
                      {"ci_lo", p.ci.lower},
                      {"ci_hi", p.ci.upper},
                      {"alpha", p.params.alpha},
                      {"beta", p.params.beta}});
  }
  return {{"t_min", curve.t_min},
          {"t_max", curve.t_max},
          {"envelope_applied", curve.envelope_applied},
          {"ci_level", curve.points.empty() ? kDefaultCiLevel : curve.points.front().ci.level},
          {"points", points}};
}

}  // namespace evtwatch
