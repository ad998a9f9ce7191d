#include "evtwatch/detector.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace evtwatch {

void DetectorConfig::validate() const {
  window.validate();
  grid.validate();
  if (t_min < 2 || t_max <= t_min) {
    throw std::invalid_argument("return period range must satisfy 2 <= t_min < t_max");
  }
  if (sporadic_min_cases < 0) throw std::invalid_argument("sporadic_min_cases must be >= 0");
  if (sporadic_weeks < 1) throw std::invalid_argument("sporadic_weeks must be >= 1");
}

bool sporadic_filter(const WeeklySeries &series, WeekStamp week, const DetectorConfig &cfg) {
  if (!series.contains(week)) {
    throw std::invalid_argument("week " + to_string(week) + " is not in the series");
  }
  std::int64_t total = 0;
  for (int back = 0; back < cfg.sporadic_weeks; ++back) {
    total += series.count_at(shift_weeks(week, -back)).value_or(0);
  }
  return total >= cfg.sporadic_min_cases;
}

std::optional<WeekStamp> backward_scan(const WeeklySeries &series, WeekStamp week, int T,
                                       double level) {
  if (T < 1) throw std::invalid_argument("backward_scan needs T >= 1");
  for (int lag = 1; lag < T; ++lag) {
    const WeekStamp prior = shift_weeks(week, -lag);
    const auto count = series.count_at(prior);
    if (count && static_cast<double>(*count) >= level) return prior;
  }
  return std::nullopt;
}

std::optional<Alarm> detect_week(const WeeklySeries &series, WeekStamp week,
                                 const DetectorConfig &cfg) {
  const auto count = series.count_at(week);
  if (!count) throw std::invalid_argument("week " + to_string(week) + " is not in the series");

  const ReferenceSample sample =
      extract_reference(series, week, cfg.window, cfg.min_reference);
  const ReturnCurve curve =
      monotone_envelope(build_curve(sample, cfg.t_min, cfg.t_max, cfg.grid));
  const ReturnPeriodAssignment period =
      assign_return_period(curve, static_cast<double>(*count));
  if (period.clamp == Clamp::below_min) return std::nullopt;

  const double level = curve.value_at(period.T);
  const auto trigger = backward_scan(series, week, period.T, level);
  if (!trigger) return std::nullopt;

  Alarm alarm;
  alarm.week = week;
  alarm.count = *count;
  alarm.T = period.T;
  alarm.level = level;
  alarm.trigger_week = *trigger;
  alarm.suppressed = !sporadic_filter(series, week, cfg);
  alarm.clamp = period.clamp;
  return alarm;
}

SurveillanceRun run_surveillance(const WeeklySeries &series, WeekStamp from, WeekStamp to,
                                 const DetectorConfig &cfg) {
  cfg.validate();
  SurveillanceRun run;
  for (const WeekCount &entry : series.entries()) {
    if (entry.week < from || to < entry.week) continue;
    try {
      if (auto alarm = detect_week(series, entry.week, cfg)) {
        run.alarms.push_back(*alarm);
      }
      run.evaluated.push_back(entry.week);
    } catch (const std::exception &e) {
      run.diagnostics.push_back({entry.week, e.what()});
    }
  }
  return run;
}

void write_alarms_csv(std::ostream &out, const std::vector<Alarm> &alarms) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "year,week,count,T,level,trigger_year,trigger_week,suppressed,clamp\n";
  for (const Alarm &a : alarms) {
    out << a.week.year << ',' << a.week.week << ',' << a.count << ',' << a.T << ','
        << a.level << ',' << a.trigger_week.year << ',' << a.trigger_week.week << ','
        << (a.suppressed ? 1 : 0) << ',' << to_string(a.clamp) << '\n';
  }
  out.precision(precision);
}

}  // namespace evtwatch
