#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evtwatch/return_curve.hpp"

using namespace evtwatch;
using Catch::Approx;

namespace {

ReturnCurve curve_from(const std::vector<double> &values, int t_min = 2) {
  ReturnCurve c;
  c.t_min = t_min;
  c.t_max = t_min + static_cast<int>(values.size()) - 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    CurvePoint p;
    p.t = t_min + static_cast<int>(i);
    p.value = values[i];
    c.points.push_back(p);
  }
  return c;
}

std::vector<double> values_of(const ReturnCurve &c) {
  std::vector<double> v;
  for (const auto &p : c.points) v.push_back(p.value);
  return v;
}

}  // namespace

TEST_CASE("build_curve", "[return_curve]") {
  const ReferenceSample s({1.0, 2.0, 3.0, 4.0});
  SECTION("two points on a single-point lattice") {
    const ReturnCurve c = build_curve(s, 2, 3, GridSpec{1, 1, 1, 1, 1});
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].t == 2);
    CHECK(c.points[0].value == Approx(7.5).epsilon(1e-15));
    CHECK(c.points[1].t == 3);
    CHECK(c.points[1].value == Approx(8.4375).epsilon(1e-15));
    CHECK_FALSE(c.envelope_applied);
    CHECK(c.points[0].ci.lower <= c.points[0].value);
    CHECK(c.points[0].ci.upper >= c.points[0].value);
  }
  SECTION("t = 2..100 gives 99 points") {
    std::mt19937_64 rng(1);
    std::poisson_distribution<int> pois(6.0);
    std::vector<double> x(35);
    for (double &v : x) v = pois(rng);
    const ReturnCurve c = build_curve(ReferenceSample(x), 2, 100, GridSpec{});
    CHECK(c.points.size() == 99);
    for (std::size_t i = 0; i < c.points.size(); ++i) CHECK(c.points[i].t == 2 + static_cast<int>(i));
  }
  SECTION("constant sample curve stays above the constant") {
    const ReferenceSample c(std::vector<double>(35, 6.0));
    const ReturnCurve curve = build_curve(c, 2, 40, GridSpec{0.1, 3.0, 3.0, 3.0, 0.1});
    for (const auto &p : curve.points) CHECK(p.value >= 6.0);
  }
  CHECK_THROWS_AS(build_curve(s, 1, 10, GridSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(build_curve(s, 5, 5, GridSpec{}), std::invalid_argument);
}

TEST_CASE("monotone_envelope", "[return_curve]") {
  CHECK(values_of(monotone_envelope(curve_from({3, 5, 4, 8}))) == std::vector<double>{3, 5, 5, 8});
  CHECK(values_of(monotone_envelope(curve_from({1, 2, 3}))) == std::vector<double>{1, 2, 3});
  CHECK(values_of(monotone_envelope(curve_from({4, 4, 4}))) == std::vector<double>{4, 4, 4});
  CHECK(monotone_envelope(curve_from({1, 2})).envelope_applied);
}

TEST_CASE("assign_return_period", "[return_curve]") {
  const ReturnCurve c = monotone_envelope(curve_from({3, 5, 5, 8}));
  auto r = assign_return_period(c, 5.0);
  CHECK(r.T == 4);
  CHECK(r.clamp == Clamp::none);
  r = assign_return_period(c, 2.0);
  CHECK(r.clamp == Clamp::below_min);
  CHECK(r.T == 1);
  r = assign_return_period(c, 100.0);
  CHECK(r.clamp == Clamp::above_max);
  CHECK(r.T == 5);
  r = assign_return_period(c, 8.0);
  CHECK(r.T == 5);
  CHECK(r.clamp == Clamp::none);
  r = assign_return_period(c, 7.99);
  CHECK(r.T == 4);
  CHECK_THROWS_AS(assign_return_period(curve_from({1, 2}), 1.5), std::logic_error);
}

TEST_CASE("Envelope and inversion properties", "[return_curve][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> step(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> raw(5 + rng() % 60);
    double level = step(rng);
    for (double &v : raw) {
      v = level + step(rng) - 0.8;  // not monotone
      level += 0.3;
    }
    const ReturnCurve once = monotone_envelope(curve_from(raw));
    CHECK(values_of(monotone_envelope(once)) == values_of(once));
    for (std::size_t i = 1; i < once.points.size(); ++i) {
      CHECK(once.points[i].value >= once.points[i - 1].value);
    }
    int previous_T = -1;
    for (double x = -1.0; x < level + 4.0; x += 0.05) {
      const auto r = assign_return_period(once, x);
      CHECK(r.T >= previous_T);
      previous_T = r.T;
    }

    // Strictly increasing curve: reading a curve value returns its own t.
    std::vector<double> strict(raw.size());
    double v = step(rng);
    for (double &s : strict) s = (v += 0.01 + step(rng));
    const ReturnCurve inc = monotone_envelope(curve_from(strict, 3));
    for (const auto &p : inc.points) {
      const auto r = assign_return_period(inc, p.value);
      CHECK(r.T == p.t);
      CHECK(r.clamp == Clamp::none);
    }
  }
}

TEST_CASE("Curve export", "[return_curve][io]") {
  std::mt19937_64 rng(2);
  std::poisson_distribution<int> pois(4.0);
  std::vector<double> x(35);
  for (double &v : x) v = pois(rng);
  const ReturnCurve c =
      monotone_envelope(build_curve(ReferenceSample(x), 2, 100, GridSpec{0.1, 4, 4, 4, 0.1}));
  std::ostringstream csv;
  write_curve_csv(csv, c);
  const nlohmann::json json = curve_to_json(c);

  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,b_hat,ci_lo,ci_hi,alpha,beta");
  std::size_t row = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 6);
    const auto &j = json["points"][row];
    CHECK(v[0] == j["t"].get<int>());
    CHECK(v[1] == j["b_hat"].get<double>());
    CHECK(v[2] == j["ci_lo"].get<double>());
    CHECK(v[3] == j["ci_hi"].get<double>());
    CHECK(v[4] == j["alpha"].get<double>());
    CHECK(v[5] == j["beta"].get<double>());
    ++row;
  }
  CHECK(row == 99);
  CHECK(json["points"].size() == 99);
}

TEST_CASE("Lower curve sits below the upper curve", "[return_curve]") {
  std::mt19937_64 rng(21);
  std::poisson_distribution<int> pois(5.0);
  std::vector<double> x(35);
  for (double &v : x) v = pois(rng);
  const ReferenceSample s(x);
  const GridSpec grid{0.1, 3.0, 3.0, 3.0, 0.1};
  const auto lower = build_lower_curve(s, 2, 60, grid);
  const ReturnCurve upper = build_curve(s, 2, 60, grid);
  REQUIRE(lower.size() == upper.points.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    CHECK(lower[i].value <= upper.points[i].value);
    CHECK(lower[i].value >= 0.0);
  }
}
