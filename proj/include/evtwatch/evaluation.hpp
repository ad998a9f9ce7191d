#ifndef EVTWATCH_EVALUATION_HPP_
#define EVTWATCH_EVALUATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evtwatch/detector.hpp"
#include "evtwatch/timeseries.hpp"

namespace evtwatch {

struct WeekFlag {
  WeekStamp week;
  bool flag = false;
};

// A boolean per week, weeks strictly increasing.  Used both for alarm
// series and for outbreak truth labels.
class FlagSeries {
 public:
  FlagSeries() = default;
  // Throws std::invalid_argument unless weeks are valid and strictly increasing.
  FlagSeries(std::string label, std::vector<WeekFlag> flags);

  const std::string &label() const { return label_; }
  const std::vector<WeekFlag> &flags() const { return flags_; }
  std::size_t size() const { return flags_.size(); }
  std::size_t count_set() const;

 private:
  std::string label_;
  std::vector<WeekFlag> flags_;
};

using AlarmSeries = FlagSeries;
using TruthLabels = FlagSeries;

// One flag per evaluated week; set for alarms, optionally ignoring the
// suppressed ones.
AlarmSeries to_alarm_series(const SurveillanceRun &run, std::string label,
                            bool count_suppressed = false);

// CSV with header `year,week,<column>` and 0/1 values.
void write_flags_csv(std::ostream &out, const FlagSeries &series, std::string_view column);
FlagSeries read_flags_csv(std::istream &in, std::string_view column, std::string label = {});

// Rows: detector A -/+, columns: detector B -/+.
struct ConcordanceTable {
  std::int64_t nn = 0;
  std::int64_t np = 0;
  std::int64_t pn = 0;
  std::int64_t pp = 0;

  std::int64_t total() const { return nn + np + pn + pp; }
  double concordance() const;
  // Percentage in tenths, rounded half away from zero (993 means 99.3%).
  std::int64_t concordance_tenths() const;
  std::string concordance_display() const;

  friend bool operator==(const ConcordanceTable &, const ConcordanceTable &) = default;
};

// Throws std::invalid_argument when the two series cover different weeks.
ConcordanceTable concordance(const AlarmSeries &a, const AlarmSeries &b);

struct Outbreak {
  WeekStamp start;
  int duration_weeks = 1;
  double multiplier = 2.0;
};

struct SyntheticSpec {
  int start_year = 2000;
  int years = 10;
  double baseline_mean = 5.0;
  double seasonal_amplitude = 0.0;
  double trend_per_year = 0.0;
  // Negative binomial extra-Poisson variance: var = mu + dispersion * mu^2.
  double dispersion = 0.0;
  std::vector<Outbreak> outbreaks;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on a malformed spec or a nonpositive weekly
  // mean anywhere in the simulated span.
  void validate() const;
  // Expected count in a week, before any outbreak multiplier.
  double baseline_at(WeekStamp week) const;
  WeekStamp first_week() const { return {start_year, 1}; }
  WeekStamp last_week() const;
};

struct SimulatedData {
  WeeklySeries series;
  TruthLabels truth;
};

// Deterministic given spec.seed.  Every ISO week of the span is present.
SimulatedData simulate(const SyntheticSpec &spec);

struct ScoreReport {
  double sensitivity = 0.0;
  double false_alarm_rate = 0.0;
  // Mean weeks from outbreak start to first alarm over detected outbreaks;
  // empty when none was detected.
  std::optional<double> timeliness;
  std::int64_t detected_outbreaks = 0;
  std::int64_t total_outbreaks = 0;
};

// Outbreaks are the maximal runs of consecutive flagged truth weeks.
ScoreReport score(const AlarmSeries &alarms, const TruthLabels &truth);
nlohmann::json score_to_json(const ScoreReport &report);

// Alarm iff the count exceeds mean + z * sd of the reference sample (sample
// standard deviation).
bool baseline_detector(const WeeklySeries &series, WeekStamp week, const WindowSpec &spec,
                       double z, std::size_t min_reference = kDefaultMinReference);

}  // namespace evtwatch

#endif  // EVTWATCH_EVALUATION_HPP_
