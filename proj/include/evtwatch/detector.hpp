#ifndef EVTWATCH_DETECTOR_HPP_
#define EVTWATCH_DETECTOR_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evtwatch/optimizer.hpp"
#include "evtwatch/return_curve.hpp"
#include "evtwatch/timeseries.hpp"

namespace evtwatch {

struct DetectorConfig {
  WindowSpec window;
  GridSpec grid;
  int t_min = 2;
  int t_max = 100;
  // An alarm is kept only if the trailing `sporadic_weeks` weeks, current
  // week included, hold at least `sporadic_min_cases` cases.
  std::int64_t sporadic_min_cases = 5;
  int sporadic_weeks = 4;
  std::size_t min_reference = kDefaultMinReference;

  void validate() const;
};

struct Alarm {
  WeekStamp week;
  std::int64_t count = 0;
  int T = 0;
  // Enveloped curve value at T; the threshold for the backward scan.
  double level = 0.0;
  WeekStamp trigger_week;
  bool suppressed = false;
  Clamp clamp = Clamp::none;
};

// True (keep) when the trailing-window case total reaches the minimum.
// Missing weeks count as zero.  Throws std::invalid_argument if `week` is
// not in the series.
bool sporadic_filter(const WeeklySeries &series, WeekStamp week, const DetectorConfig &cfg);

// Most recent week in the open interval (week - T, week) whose count is
// >= level.  Missing weeks are skipped.
std::optional<WeekStamp> backward_scan(const WeeklySeries &series, WeekStamp week, int T,
                                       double level);

// Full per-week pipeline: reference sample, enveloped return curve, return
// period of the current count, then the backward scan.
std::optional<Alarm> detect_week(const WeeklySeries &series, WeekStamp week,
                                 const DetectorConfig &cfg);

struct WeekDiagnostic {
  WeekStamp week;
  std::string message;
};

struct SurveillanceRun {
  // Weeks for which detection completed, in order.
  std::vector<WeekStamp> evaluated;
  // Alarms including suppressed ones.
  std::vector<Alarm> alarms;
  // Weeks skipped because of insufficient history or similar.
  std::vector<WeekDiagnostic> diagnostics;
};

// Prospective weekly run over the observed weeks in [from, to].  Per-week
// failures become diagnostics and do not stop the run.
SurveillanceRun run_surveillance(const WeeklySeries &series, WeekStamp from, WeekStamp to,
                                 const DetectorConfig &cfg);

// Columns: year,week,count,T,level,trigger_year,trigger_week,suppressed,clamp
void write_alarms_csv(std::ostream &out, const std::vector<Alarm> &alarms);

}  // namespace evtwatch

#endif  // EVTWATCH_DETECTOR_HPP_
