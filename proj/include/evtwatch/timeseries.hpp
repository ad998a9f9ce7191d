#ifndef EVTWATCH_TIMESERIES_HPP_
#define EVTWATCH_TIMESERIES_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evtwatch {

// An ISO 8601 week of a week-based year.  Ordering is calendar ordering.
struct WeekStamp {
  int year = 0;
  int week = 0;

  friend auto operator<=>(const WeekStamp &, const WeekStamp &) = default;
};

// Number of ISO weeks (52 or 53) in the given ISO week-based year.
int iso_weeks_in_year(int year);

bool is_valid(WeekStamp stamp);

// Consecutive integer index of an ISO week.  Adjacent weeks differ by 1,
// including across year boundaries.
std::int64_t week_ordinal(WeekStamp stamp);
WeekStamp week_from_ordinal(std::int64_t ordinal);

// Calendar shift by a number of weeks (negative goes back in time).
WeekStamp shift_weeks(WeekStamp stamp, std::int64_t weeks);

// Formats as "2008-W05"; parse accepts the same form.
std::string to_string(WeekStamp stamp);
WeekStamp parse_week_stamp(std::string_view text);

// Raised for malformed series input.  The message carries the row location.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string &what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when a reference window holds fewer counts than required.
class InsufficientHistory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeekCount {
  WeekStamp week;
  std::int64_t count = 0;
};

// Weekly counts for one monitored series.  Entries are strictly increasing
// in week and all counts are nonnegative; gaps are missing weeks.
class WeeklySeries {
 public:
  WeeklySeries() = default;

  // Sorts the entries.  Throws std::invalid_argument on duplicate or invalid
  // weeks and on negative counts.
  WeeklySeries(std::string label, std::vector<WeekCount> entries);

  const std::string &label() const { return label_; }
  const std::vector<WeekCount> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::optional<std::int64_t> count_at(WeekStamp week) const;
  bool contains(WeekStamp week) const { return count_at(week).has_value(); }

  // The series restricted to weeks <= last.
  WeeklySeries truncated_after(WeekStamp last) const;

 private:
  std::string label_;
  std::vector<WeekCount> entries_;
};

// Reads `year,week,count` CSV (header required).  Rows may appear in any
// order.  Throws InputError naming the offending line.
WeeklySeries ingest_csv(std::istream &in, std::string label = {});

void write_series_csv(std::ostream &out, const WeeklySeries &series);

// Seasonal reference window: weeks current.week-w .. current.week+w in each
// of the `years_back` years preceding the current one.
struct WindowSpec {
  int years_back = 5;
  int half_width = 3;

  // Throws std::invalid_argument unless years_back >= 1 and half_width >= 0.
  void validate() const;
  std::size_t nominal_size() const {
    return static_cast<std::size_t>(years_back) * (2 * half_width + 1);
  }
};

inline constexpr std::size_t kDefaultMinReference = 20;

// Order statistics of a sample of nonnegative counts.  values() is sorted
// ascending; when provenance is present, provenance()[i] is the week that
// contributed values()[i].
class ReferenceSample {
 public:
  ReferenceSample() = default;
  explicit ReferenceSample(std::vector<double> values);
  ReferenceSample(std::vector<double> values, std::vector<WeekStamp> provenance);

  const std::vector<double> &values() const { return values_; }
  const std::vector<WeekStamp> &provenance() const { return provenance_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

 private:
  std::vector<double> values_;
  std::vector<WeekStamp> provenance_;
};

// The stamps making up the reference window of `current`, in enumeration
// order (oldest year first).  Week numbers wrap into the neighbouring year;
// a current week 53 maps to week 52 in history years without one.  Stamps
// falling in the current year or later are dropped.
std::vector<WeekStamp> reference_window(WeekStamp current, const WindowSpec &spec);

// Collects the counts present in the reference window.  Missing weeks are
// skipped.  Throws InsufficientHistory when fewer than min_size remain.
ReferenceSample extract_reference(const WeeklySeries &series, WeekStamp current,
                                  const WindowSpec &spec,
                                  std::size_t min_size = kDefaultMinReference);

}  // namespace evtwatch

#endif  // EVTWATCH_TIMESERIES_HPP_
