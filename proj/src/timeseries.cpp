#include "evtwatch/timeseries.hpp"

#include "csv_util.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <istream>
#include <numeric>
#include <ostream>

namespace evtwatch {

namespace {

namespace chr = std::chrono;
using csv::parse_int;
using csv::trim;

// 1970-01-05, the first Monday after the system clock epoch.
constexpr std::int64_t kMondayEpochDays = 4;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

chr::sys_days week_one_monday(int year) {
  const chr::sys_days jan4 = chr::year{year} / chr::January / 4;
  const unsigned iso_day = chr::weekday{jan4}.iso_encoding();  // Mon=1..Sun=7
  return jan4 - chr::days{iso_day - 1};
}

}  // namespace

int iso_weeks_in_year(int year) {
  const auto days = week_one_monday(year + 1) - week_one_monday(year);
  return static_cast<int>(days.count() / 7);
}

bool is_valid(WeekStamp stamp) {
  return stamp.week >= 1 && stamp.week <= iso_weeks_in_year(stamp.year);
}

std::int64_t week_ordinal(WeekStamp stamp) {
  const chr::sys_days monday =
      week_one_monday(stamp.year) + chr::days{7 * (stamp.week - 1)};
  return floor_div(monday.time_since_epoch().count() - kMondayEpochDays, 7);
}

WeekStamp week_from_ordinal(std::int64_t ordinal) {
  const chr::sys_days monday{chr::days{kMondayEpochDays + 7 * ordinal}};
  // The ISO year is the calendar year of the week's Thursday.
  const chr::year_month_day thursday{monday + chr::days{3}};
  const int year = static_cast<int>(thursday.year());
  const auto offset = monday - week_one_monday(year);
  return {year, static_cast<int>(offset.count() / 7) + 1};
}

WeekStamp shift_weeks(WeekStamp stamp, std::int64_t weeks) {
  return week_from_ordinal(week_ordinal(stamp) + weeks);
}

std::string to_string(WeekStamp stamp) {
  std::string week = std::to_string(stamp.week);
  if (week.size() < 2) week.insert(0, "0");
  return std::to_string(stamp.year) + "-W" + week;
}

WeekStamp parse_week_stamp(std::string_view text) {
  text = trim(text);
  const std::size_t sep = text.find("-W");
  std::int64_t year = 0;
  std::int64_t week = 0;
  if (sep == std::string_view::npos || !parse_int(text.substr(0, sep), year) ||
      !parse_int(text.substr(sep + 2), week)) {
    throw std::invalid_argument("malformed week stamp '" + std::string(text) +
                                "' (expected YYYY-Www)");
  }
  const WeekStamp stamp{static_cast<int>(year), static_cast<int>(week)};
  if (!is_valid(stamp)) {
    throw std::invalid_argument("invalid ISO week '" + std::string(text) + "'");
  }
  return stamp;
}

WeeklySeries::WeeklySeries(std::string label, std::vector<WeekCount> entries)
    : label_(std::move(label)), entries_(std::move(entries)) {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const WeekCount &a, const WeekCount &b) { return a.week < b.week; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const WeekCount &e = entries_[i];
    if (!is_valid(e.week)) {
      throw std::invalid_argument("invalid week " + std::to_string(e.week.year) + "/" +
                                  std::to_string(e.week.week));
    }
    if (e.count < 0) {
      throw std::invalid_argument("negative count at " + to_string(e.week));
    }
    if (i > 0 && entries_[i - 1].week == e.week) {
      throw std::invalid_argument("duplicate week " + to_string(e.week));
    }
  }
}

std::optional<std::int64_t> WeeklySeries::count_at(WeekStamp week) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), week,
      [](const WeekCount &e, const WeekStamp &w) { return e.week < w; });
  if (it == entries_.end() || it->week != week) return std::nullopt;
  return it->count;
}

WeeklySeries WeeklySeries::truncated_after(WeekStamp last) const {
  std::vector<WeekCount> kept;
  for (const WeekCount &e : entries_) {
    if (e.week <= last) kept.push_back(e);
  }
  return WeeklySeries(label_, std::move(kept));
}

WeeklySeries ingest_csv(std::istream &in, std::string label) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<WeekCount> rows;
  std::vector<std::size_t> row_lines;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (line_no == 1) view = csv::strip_bom(view);
    if (view.empty()) continue;
    const auto fields = csv::split(view);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "year" || fields[1] != "week" ||
          fields[2] != "count") {
        throw InputError("expected header 'year,week,count'", line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw InputError("expected 3 fields, found " + std::to_string(fields.size()), line_no);
    }
    std::int64_t year = 0, week = 0, count = 0;
    if (!parse_int(fields[0], year) || !parse_int(fields[1], week) ||
        !parse_int(fields[2], count)) {
      throw InputError("malformed row '" + std::string(view) + "'", line_no);
    }
    if (count < 0) throw InputError("negative count", line_no);
    const WeekStamp stamp{static_cast<int>(year), static_cast<int>(week)};
    if (week < 1 || week > 53 || !is_valid(stamp)) {
      throw InputError("invalid week number " + std::to_string(week) + " for year " +
                           std::to_string(year),
                       line_no);
    }
    rows.push_back({stamp, count});
    row_lines.push_back(line_no);
  }
  if (!have_header) throw InputError("missing header 'year,week,count'", line_no);

  // Duplicates are reported against the later of the two rows.
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].week < rows[b].week;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (rows[order[k]].week == rows[order[k - 1]].week) {
      const std::size_t later = std::max(row_lines[order[k]], row_lines[order[k - 1]]);
      throw InputError("duplicate week " + to_string(rows[order[k]].week), later);
    }
  }
  return WeeklySeries(std::move(label), std::move(rows));
}

void write_series_csv(std::ostream &out, const WeeklySeries &series) {
  out << "year,week,count\n";
  for (const WeekCount &e : series.entries()) {
    out << e.week.year << ',' << e.week.week << ',' << e.count << '\n';
  }
}

void WindowSpec::validate() const {
  if (years_back < 1) throw std::invalid_argument("window years_back (b) must be >= 1");
  if (half_width < 0) throw std::invalid_argument("window half_width (w) must be >= 0");
}

ReferenceSample::ReferenceSample(std::vector<double> values)
    : ReferenceSample(std::move(values), {}) {}

ReferenceSample::ReferenceSample(std::vector<double> values,
                                 std::vector<WeekStamp> provenance) {
  if (!provenance.empty() && provenance.size() != values.size()) {
    throw std::invalid_argument("provenance size does not match sample size");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("reference values must be finite and nonnegative");
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  values_.reserve(values.size());
  for (std::size_t i : order) values_.push_back(values[i]);
  if (!provenance.empty()) {
    provenance_.reserve(values.size());
    for (std::size_t i : order) provenance_.push_back(provenance[i]);
  }
}

std::vector<WeekStamp> reference_window(WeekStamp current, const WindowSpec &spec) {
  spec.validate();
  std::vector<WeekStamp> stamps;
  stamps.reserve(spec.nominal_size());
  for (int back = spec.years_back; back >= 1; --back) {
    const int year = current.year - back;
    const WeekStamp anchor{year, std::min(current.week, iso_weeks_in_year(year))};
    for (int d = -spec.half_width; d <= spec.half_width; ++d) {
      const WeekStamp stamp = shift_weeks(anchor, d);
      if (stamp.year < current.year) stamps.push_back(stamp);
    }
  }
  return stamps;
}

ReferenceSample extract_reference(const WeeklySeries &series, WeekStamp current,
                                  const WindowSpec &spec, std::size_t min_size) {
  std::vector<double> values;
  std::vector<WeekStamp> provenance;
  for (const WeekStamp &stamp : reference_window(current, spec)) {
    if (const auto count = series.count_at(stamp)) {
      values.push_back(static_cast<double>(*count));
      provenance.push_back(stamp);
    }
  }
  if (values.size() < min_size || values.empty()) {
    throw InsufficientHistory("reference window for " + to_string(current) + " holds " +
                              std::to_string(values.size()) + " counts, need " +
                              std::to_string(std::max<std::size_t>(min_size, 1)));
  }
  return ReferenceSample(std::move(values), std::move(provenance));
}

}  // namespace evtwatch
