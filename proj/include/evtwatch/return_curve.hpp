#ifndef EVTWATCH_RETURN_CURVE_HPP_
#define EVTWATCH_RETURN_CURVE_HPP_

#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evtwatch/evt_core.hpp"
#include "evtwatch/optimizer.hpp"

namespace evtwatch {

inline constexpr double kDefaultCiLevel = 0.95;

struct CurvePoint {
  int t = 0;
  double value = 0.0;
  ConfidenceInterval ci;
  PowerParams params;
};

// Return level / return period graph: the optimised upper bound at every
// integer t in [t_min, t_max].
struct ReturnCurve {
  std::vector<CurvePoint> points;
  int t_min = 0;
  int t_max = 0;
  bool envelope_applied = false;

  double value_at(int t) const { return points.at(static_cast<std::size_t>(t - t_min)).value; }
};

enum class Clamp { none, below_min, above_max };

const char *to_string(Clamp clamp);

struct ReturnPeriodAssignment {
  int T = 0;
  Clamp clamp = Clamp::none;
};

// One optimisation per integer t; each point carries the interval computed
// at its own optimal exponents.  Requires 2 <= t_min < t_max.
ReturnCurve build_curve(const ReferenceSample &sample, int t_min, int t_max,
                        const GridSpec &grid, double ci_level = kDefaultCiLevel);
ReturnCurve build_curve(const ReferenceSample &sample, int t_min, int t_max,
                        const ParamAxes &axes, double ci_level = kDefaultCiLevel);

// Running maximum of the values.  Intervals and exponents are left as
// estimated.
ReturnCurve monotone_envelope(ReturnCurve curve);

// Largest t whose enveloped value is <= x.  Below the curve gives
// T = t_min - 1 with Clamp::below_min; above it gives T = t_max with
// Clamp::above_max.  Throws std::logic_error if the envelope is missing.
ReturnPeriodAssignment assign_return_period(const ReturnCurve &curve, double x);

// The optimised lower bound at each t, kept for diagnostics only.
struct LowerCurvePoint {
  int t = 0;
  double value = 0.0;
  PowerParams params;
  bool clamped = false;
};
std::vector<LowerCurvePoint> build_lower_curve(const ReferenceSample &sample, int t_min,
                                               int t_max, const GridSpec &grid);

// CSV columns: t,b_hat,ci_lo,ci_hi,alpha,beta
void write_curve_csv(std::ostream &out, const ReturnCurve &curve);
void write_lower_curve_csv(std::ostream &out, const std::vector<LowerCurvePoint> &curve);
nlohmann::json curve_to_json(const ReturnCurve &curve);

}  // namespace evtwatch

#endif  // EVTWATCH_RETURN_CURVE_HPP_
