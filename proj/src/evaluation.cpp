#include "evtwatch/evaluation.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "csv_util.hpp"

namespace evtwatch {

FlagSeries::FlagSeries(std::string label, std::vector<WeekFlag> flags)
    : label_(std::move(label)), flags_(std::move(flags)) {
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (!is_valid(flags_[i].week)) {
      throw std::invalid_argument("invalid week in flag series '" + label_ + "'");
    }
    if (i > 0 && !(flags_[i - 1].week < flags_[i].week)) {
      throw std::invalid_argument("flag series '" + label_ +
                                  "' weeks must be strictly increasing at " +
                                  to_string(flags_[i].week));
    }
  }
}

std::size_t FlagSeries::count_set() const {
  std::size_t n = 0;
  for (const WeekFlag &f : flags_) n += f.flag ? 1 : 0;
  return n;
}

AlarmSeries to_alarm_series(const SurveillanceRun &run, std::string label,
                            bool count_suppressed) {
  std::vector<WeekFlag> flags;
  flags.reserve(run.evaluated.size());
  auto alarm = run.alarms.begin();
  for (const WeekStamp &week : run.evaluated) {
    bool set = false;
    if (alarm != run.alarms.end() && alarm->week == week) {
      set = count_suppressed || !alarm->suppressed;
      ++alarm;
    }
    flags.push_back({week, set});
  }
  return AlarmSeries(std::move(label), std::move(flags));
}

void write_flags_csv(std::ostream &out, const FlagSeries &series, std::string_view column) {
  out << "year,week," << column << '\n';
  for (const WeekFlag &f : series.flags()) {
    out << f.week.year << ',' << f.week.week << ',' << (f.flag ? 1 : 0) << '\n';
  }
}

FlagSeries read_flags_csv(std::istream &in, std::string_view column, std::string label) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<WeekFlag> flags;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = csv::trim(line);
    if (line_no == 1) view = csv::strip_bom(view);
    if (view.empty()) continue;
    const auto fields = csv::split(view);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "year" || fields[1] != "week" ||
          fields[2] != column) {
        throw InputError("expected header 'year,week," + std::string(column) + "'", line_no);
      }
      have_header = true;
      continue;
    }
    std::int64_t year = 0, week = 0, value = 0;
    if (fields.size() != 3 || !csv::parse_int(fields[0], year) ||
        !csv::parse_int(fields[1], week) || !csv::parse_int(fields[2], value) ||
        (value != 0 && value != 1)) {
      throw InputError("malformed row '" + std::string(view) + "'", line_no);
    }
    const WeekStamp stamp{static_cast<int>(year), static_cast<int>(week)};
    if (!is_valid(stamp)) throw InputError("invalid week number", line_no);
    if (!flags.empty() && !(flags.back().week < stamp)) {
      throw InputError("weeks must be strictly increasing", line_no);
    }
    flags.push_back({stamp, value == 1});
  }
  if (!have_header) {
    throw InputError("missing header 'year,week," + std::string(column) + "'", line_no);
  }
  return FlagSeries(std::move(label), std::move(flags));
}

double ConcordanceTable::concordance() const {
  if (total() == 0) throw std::domain_error("concordance of an empty table");
  return static_cast<double>(nn + pp) / static_cast<double>(total());
}

std::int64_t ConcordanceTable::concordance_tenths() const {
  if (total() == 0) throw std::domain_error("concordance of an empty table");
  // round(1000 * agree / total), halves away from zero; all terms nonnegative.
  return (2000 * (nn + pp) + total()) / (2 * total());
}

std::string ConcordanceTable::concordance_display() const {
  const std::int64_t tenths = concordance_tenths();
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

ConcordanceTable concordance(const AlarmSeries &a, const AlarmSeries &b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("alarm series cover different numbers of weeks (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  if (a.size() == 0) throw std::invalid_argument("alarm series are empty");
  ConcordanceTable table;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const WeekFlag &fa = a.flags()[i];
    const WeekFlag &fb = b.flags()[i];
    if (fa.week != fb.week) {
      throw std::invalid_argument("alarm series week sets differ at " + to_string(fa.week) +
                                  " / " + to_string(fb.week));
    }
    if (!fa.flag && !fb.flag) ++table.nn;
    else if (!fa.flag && fb.flag) ++table.np;
    else if (fa.flag && !fb.flag) ++table.pn;
    else ++table.pp;
  }
  return table;
}

void SyntheticSpec::validate() const {
  if (years < 1) throw std::invalid_argument("simulation needs years >= 1");
  if (!(baseline_mean > 0.0)) throw std::invalid_argument("baseline_mean must be > 0");
  if (!(seasonal_amplitude >= 0.0 && seasonal_amplitude < 1.0)) {
    throw std::invalid_argument("seasonal_amplitude must lie in [0, 1)");
  }
  if (!(dispersion >= 0.0)) throw std::invalid_argument("dispersion must be >= 0");
  if (!std::isfinite(trend_per_year)) throw std::invalid_argument("trend_per_year must be finite");
  for (const Outbreak &o : outbreaks) {
    if (!is_valid(o.start)) throw std::invalid_argument("outbreak start is not a valid week");
    if (o.duration_weeks < 1) throw std::invalid_argument("outbreak duration must be >= 1");
    if (!(o.multiplier >= 1.0) || !std::isfinite(o.multiplier)) {
      throw std::invalid_argument("outbreak multiplier must be >= 1");
    }
  }
  const std::int64_t first = week_ordinal(first_week());
  const std::int64_t last = week_ordinal(last_week());
  for (std::int64_t ord = first; ord <= last; ++ord) {
    const double mean = baseline_at(week_from_ordinal(ord));
    if (!(mean > 0.0)) {
      throw std::invalid_argument("weekly mean is not positive at " +
                                  to_string(week_from_ordinal(ord)));
    }
  }
}

double SyntheticSpec::baseline_at(WeekStamp week) const {
  const double elapsed_years =
      static_cast<double>(week_ordinal(week) - week_ordinal(first_week())) / 52.0;
  const double season =
      1.0 + seasonal_amplitude * std::cos(2.0 * std::numbers::pi * week.week / 52.0);
  return baseline_mean * season * (1.0 + trend_per_year * elapsed_years);
}

WeekStamp SyntheticSpec::last_week() const {
  const int year = start_year + years - 1;
  return {year, iso_weeks_in_year(year)};
}

SimulatedData simulate(const SyntheticSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<WeekCount> counts;
  std::vector<WeekFlag> truth;

  const std::int64_t first = week_ordinal(spec.first_week());
  const std::int64_t last = week_ordinal(spec.last_week());
  for (std::int64_t ord = first; ord <= last; ++ord) {
    const WeekStamp week = week_from_ordinal(ord);
    double mean = spec.baseline_at(week);
    bool in_outbreak = false;
    for (const Outbreak &o : spec.outbreaks) {
      const std::int64_t start = week_ordinal(o.start);
      if (ord >= start && ord < start + o.duration_weeks) {
        mean *= o.multiplier;
        in_outbreak = true;
      }
    }
    double rate = mean;
    if (spec.dispersion > 0.0) {
      std::gamma_distribution<double> mix(1.0 / spec.dispersion, spec.dispersion * mean);
      rate = mix(rng);
    }
    std::int64_t count = 0;
    if (rate > 0.0) {
      std::poisson_distribution<std::int64_t> draw(rate);
      count = draw(rng);
    }
    counts.push_back({week, count});
    truth.push_back({week, in_outbreak});
  }
  return {WeeklySeries("simulated", std::move(counts)),
          TruthLabels("truth", std::move(truth))};
}

ScoreReport score(const AlarmSeries &alarms, const TruthLabels &truth) {
  if (alarms.size() != truth.size()) {
    throw std::invalid_argument("alarm and truth series cover different weeks");
  }
  ScoreReport report;
  std::int64_t outbreak_weeks = 0, outbreak_hits = 0;
  std::int64_t quiet_weeks = 0, quiet_hits = 0;
  double delay_sum = 0.0;

  bool in_run = false;
  bool run_detected = false;
  std::int64_t run_start = 0;
  std::int64_t previous_ord = 0;
  const auto close_run = [&] {
    if (in_run) {
      ++report.total_outbreaks;
      if (run_detected) ++report.detected_outbreaks;
    }
    in_run = false;
    run_detected = false;
  };

  for (std::size_t i = 0; i < alarms.size(); ++i) {
    const WeekFlag &a = alarms.flags()[i];
    const WeekFlag &t = truth.flags()[i];
    if (a.week != t.week) {
      throw std::invalid_argument("alarm and truth weeks differ at " + to_string(a.week));
    }
    const std::int64_t ord = week_ordinal(a.week);
    if (t.flag) {
      if (in_run && ord != previous_ord + 1) close_run();
      if (!in_run) {
        in_run = true;
        run_start = ord;
      }
      ++outbreak_weeks;
      if (a.flag) {
        ++outbreak_hits;
        if (!run_detected) {
          run_detected = true;
          delay_sum += static_cast<double>(ord - run_start);
        }
      }
    } else {
      close_run();
      ++quiet_weeks;
      if (a.flag) ++quiet_hits;
    }
    previous_ord = ord;
  }
  close_run();

  if (outbreak_weeks > 0) {
    report.sensitivity = static_cast<double>(outbreak_hits) / static_cast<double>(outbreak_weeks);
  }
  if (quiet_weeks > 0) {
    report.false_alarm_rate = static_cast<double>(quiet_hits) / static_cast<double>(quiet_weeks);
  }
  if (report.detected_outbreaks > 0) {
    report.timeliness = delay_sum / static_cast<double>(report.detected_outbreaks);
  }
  return report;
}

nlohmann::json score_to_json(const ScoreReport &report) {
  nlohmann::json out = {{"sensitivity", report.sensitivity},
                        {"false_alarm_rate", report.false_alarm_rate},
                        {"detected_outbreaks", report.detected_outbreaks},
                        {"total_outbreaks", report.total_outbreaks}};
  out["timeliness"] = report.timeliness ? nlohmann::json(*report.timeliness) : nlohmann::json();
  return out;
}

bool baseline_detector(const WeeklySeries &series, WeekStamp week, const WindowSpec &spec,
                       double z, std::size_t min_reference) {
  const auto count = series.count_at(week);
  if (!count) throw std::invalid_argument("week " + to_string(week) + " is not in the series");
  const ReferenceSample sample = extract_reference(series, week, spec, min_reference);
  const auto &x = sample.values();
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double observed = static_cast<double>(*count);
  if (sd == 0.0) return observed > mean;
  return observed > mean + z * sd;
}

}  // namespace evtwatch
