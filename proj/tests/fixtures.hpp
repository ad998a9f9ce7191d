#ifndef EVTWATCH_TESTS_FIXTURES_HPP_
#define EVTWATCH_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evtwatch/detector.hpp"
#include "evtwatch/evaluation.hpp"
#include "evtwatch/timeseries.hpp"

namespace fixtures {

using evtwatch::WeekStamp;

// Every ISO week of [first_year, last_week] with the given count, then the
// overrides applied.
inline evtwatch::WeeklySeries flat_series(int first_year, WeekStamp last_week,
                                          std::int64_t count,
                                          const std::map<WeekStamp, std::int64_t> &overrides = {}) {
  std::vector<evtwatch::WeekCount> rows;
  for (WeekStamp w{first_year, 1}; w <= last_week; w = evtwatch::shift_weeks(w, 1)) {
    const auto it = overrides.find(w);
    rows.push_back({w, it == overrides.end() ? count : it->second});
  }
  return evtwatch::WeeklySeries("toy", std::move(rows));
}

// Exponents pinned to alpha = beta = 1 so the curve is t^2/(t-1) theta_hat.
inline evtwatch::GridSpec unit_grid() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }

inline evtwatch::DetectorConfig toy_config() {
  evtwatch::DetectorConfig cfg;
  cfg.grid = unit_grid();
  return cfg;
}

// Six years 2003..2008 of twos.  The current week 2008-W20 holds 7; with a
// reference sample of 35 twos, theta_hat = 36/35 and the curve is
// t^2/(t-1) * 36/35, so 7 falls between b_5 = 6.4286 and b_6 = 7.4057:
// T = 5 and the scan covers lags 1..4 at level 6.4286.  A second 7 at
// `prior_lag` weeks back triggers iff prior_lag <= 4.  Later weeks hold large
// counts so that prospectivity can be checked by truncation.
inline constexpr WeekStamp kToyCurrent{2008, 20};
inline constexpr double kToyLevel = 6.25 * 36.0 / 35.0;

inline evtwatch::WeeklySeries toy_series(int prior_lag) {
  std::map<WeekStamp, std::int64_t> overrides{{kToyCurrent, 7}};
  overrides[evtwatch::shift_weeks(kToyCurrent, -prior_lag)] = 7;
  for (int k = 1; k <= 10; ++k) overrides[evtwatch::shift_weeks(kToyCurrent, k)] = 40;
  return flat_series(2003, {2008, 30}, 2, overrides);
}

struct Panel {
  std::string name;
  std::int64_t nn, np, pn, pp;
  std::string expected;  // concordance percentage, one decimal
};

// Farrington (rows) versus EVT (columns), 463 weeks each.
inline std::vector<Panel> serotype_panels() {
  return {{"Manhattan", 440, 3, 1, 19, "99.1"}, {"Derby", 441, 12, 7, 3, "95.9"},
          {"Agona", 427, 13, 2, 21, "96.8"},    {"Virchow", 451, 1, 11, 0, "97.4"},
          {"Typhimurium", 418, 1, 28, 16, "93.7"}, {"Enteritidis", 455, 0, 6, 2, "98.7"}};
}

// Two alarm series over consecutive weeks starting 2005-W01 realising the
// cell counts, with the cells interleaved so the pattern is not blockwise.
inline std::pair<evtwatch::AlarmSeries, evtwatch::AlarmSeries> realise(const Panel &p) {
  std::int64_t left[4] = {p.nn, p.np, p.pn, p.pp};
  std::vector<evtwatch::WeekFlag> a, b;
  WeekStamp w{2005, 1};
  int cell = 0;
  while (left[0] + left[1] + left[2] + left[3] > 0) {
    cell = (cell + 1) % 4;
    if (left[cell] == 0) continue;
    --left[cell];
    a.push_back({w, cell >= 2});
    b.push_back({w, cell % 2 == 1});
    w = evtwatch::shift_weeks(w, 1);
  }
  return {evtwatch::AlarmSeries("farrington", a), evtwatch::AlarmSeries("evt", b)};
}

}  // namespace fixtures

#endif  // EVTWATCH_TESTS_FIXTURES_HPP_
