#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evtwatch/return_curve.hpp"

namespace evtwatch::cli {

namespace {

// Bad invocation detected after parsing (unreadable input path, missing
// output choice).  Maps to kUsageError.
class UsageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageFailure("cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

WeeklySeries load_series(const std::string &path, const std::string &label) {
  std::ifstream in = open_input(path);
  try {
    return ingest_csv(in, label.empty() ? path : label);
  } catch (const InputError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

FlagSeries load_flags(const std::string &path, std::string_view column) {
  std::ifstream in = open_input(path);
  try {
    return read_flags_csv(in, column, path);
  } catch (const InputError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

struct DetectOptions {
  std::string input;
  std::string label;
  std::string from;
  std::string to;
  std::string output;
  std::string flags_out;
  std::string diagnostics;
};

struct CurveOptions {
  std::string input;
  std::string label;
  std::string week;
  std::string csv;
  std::string json;
  std::string lower_csv;
};

struct CompareOptions {
  std::string first;
  std::string second;
  std::string json;
};

struct SimulateOptions {
  std::string spec;
  std::string series_out;
  std::string truth_out;
};

struct ScoreOptions {
  std::string alarms;
  std::string truth;
  std::string json;
};

int cmd_detect(const RunConfig &config, const DetectOptions &opt, std::ostream &out,
               std::ostream &err) {
  const WeeklySeries series = load_series(opt.input, opt.label);
  if (series.empty()) throw std::runtime_error("series '" + opt.input + "' has no rows");
  const WeekStamp from =
      opt.from.empty() ? series.entries().front().week : parse_week_stamp(opt.from);
  const WeekStamp to = opt.to.empty() ? series.entries().back().week : parse_week_stamp(opt.to);
  if (to < from) throw UsageFailure("--from must not be after --to");

  const SurveillanceRun run = run_surveillance(series, from, to, config.detector);

  std::ofstream alarms_file = open_output(opt.output);
  write_alarms_csv(alarms_file, run.alarms);
  if (!opt.flags_out.empty()) {
    std::ofstream flags_file = open_output(opt.flags_out);
    write_flags_csv(flags_file, to_alarm_series(run, series.label()), "alarm");
  }
  std::optional<std::ofstream> diag_file;
  if (!opt.diagnostics.empty()) diag_file = open_output(opt.diagnostics);
  std::ostream &diag = diag_file ? static_cast<std::ostream &>(*diag_file) : err;
  for (const WeekDiagnostic &d : run.diagnostics) {
    diag << to_string(d.week) << ": " << d.message << '\n';
  }

  std::size_t suppressed = 0;
  for (const Alarm &a : run.alarms) suppressed += a.suppressed ? 1 : 0;
  out << series.label() << ": evaluated " << run.evaluated.size() << " weeks from "
      << to_string(from) << " to " << to_string(to) << "; " << run.alarms.size()
      << " alarms (" << suppressed << " suppressed); " << run.diagnostics.size()
      << " weeks skipped\n";
  return kSuccess;
}

int cmd_curve(const RunConfig &config, const CurveOptions &opt, std::ostream &out) {
  if (opt.csv.empty() && opt.json.empty()) {
    throw UsageFailure("curve needs --csv and/or --json");
  }
  const WeeklySeries series = load_series(opt.input, opt.label);
  const WeekStamp week = parse_week_stamp(opt.week);
  const DetectorConfig &det = config.detector;
  const ReferenceSample sample =
      extract_reference(series, week, det.window, det.min_reference);
  const ReturnCurve curve = monotone_envelope(
      build_curve(sample, det.t_min, det.t_max, det.grid, config.ci_level));

  if (!opt.csv.empty()) {
    std::ofstream file = open_output(opt.csv);
    write_curve_csv(file, curve);
  }
  if (!opt.json.empty()) {
    nlohmann::json doc = curve_to_json(curve);
    doc["series"] = series.label();
    doc["week"] = to_string(week);
    doc["n"] = sample.size();
    std::ofstream file = open_output(opt.json);
    file << doc.dump(2) << '\n';
  }
  if (!opt.lower_csv.empty()) {
    std::ofstream file = open_output(opt.lower_csv);
    write_lower_curve_csv(file, build_lower_curve(sample, det.t_min, det.t_max, det.grid));
  }
  out << series.label() << " at " << to_string(week) << ": n=" << sample.size() << ", t="
      << curve.t_min << ".." << curve.t_max << ", b_hat " << curve.points.front().value
      << " .. " << curve.points.back().value << '\n';
  return kSuccess;
}

int cmd_compare(const CompareOptions &opt, std::ostream &out) {
  const FlagSeries a = load_flags(opt.first, "alarm");
  const FlagSeries b = load_flags(opt.second, "alarm");
  const ConcordanceTable table = concordance(a, b);
  out << "rows: " << opt.first << ", columns: " << opt.second << '\n';
  out << std::setw(8) << "" << std::setw(8) << "-" << std::setw(8) << "+" << std::setw(8)
      << "total" << '\n';
  out << std::setw(8) << "-" << std::setw(8) << table.nn << std::setw(8) << table.np
      << std::setw(8) << table.nn + table.np << '\n';
  out << std::setw(8) << "+" << std::setw(8) << table.pn << std::setw(8) << table.pp
      << std::setw(8) << table.pn + table.pp << '\n';
  out << std::setw(8) << "total" << std::setw(8) << table.nn + table.pn << std::setw(8)
      << table.np + table.pp << std::setw(8) << table.total() << '\n';
  out << "concordance: " << table.concordance_display() << "%\n";
  if (!opt.json.empty()) {
    std::ofstream file = open_output(opt.json);
    file << nlohmann::json{{"nn", table.nn},
                           {"np", table.np},
                           {"pn", table.pn},
                           {"pp", table.pp},
                           {"total", table.total()},
                           {"concordance_percent", table.concordance_display()}}
                .dump(2)
         << '\n';
  }
  return kSuccess;
}

int cmd_simulate(const RunConfig &config, bool seed_override, const SimulateOptions &opt,
                 std::ostream &out) {
  SyntheticSpec spec = read_synthetic_spec(opt.spec);
  if (seed_override) spec.seed = config.seed;
  const SimulatedData data = simulate(spec);
  {
    std::ofstream file = open_output(opt.series_out);
    write_series_csv(file, data.series);
  }
  {
    std::ofstream file = open_output(opt.truth_out);
    write_flags_csv(file, data.truth, "in_outbreak");
  }
  out << "simulated " << data.series.size() << " weeks (" << to_string(spec.first_week())
      << " to " << to_string(spec.last_week()) << "), " << data.truth.count_set()
      << " outbreak weeks, seed " << spec.seed << '\n';
  return kSuccess;
}

int cmd_score(const ScoreOptions &opt, std::ostream &out) {
  const FlagSeries alarms = load_flags(opt.alarms, "alarm");
  const FlagSeries truth = load_flags(opt.truth, "in_outbreak");
  const ScoreReport report = score(alarms, truth);
  const nlohmann::json doc = score_to_json(report);
  if (!opt.json.empty()) {
    std::ofstream file = open_output(opt.json);
    file << doc.dump(2) << '\n';
  }
  out << "sensitivity " << report.sensitivity << ", false alarm rate "
      << report.false_alarm_rate << ", detected " << report.detected_outbreaks << "/"
      << report.total_outbreaks << " outbreaks";
  if (report.timeliness) out << ", timeliness " << *report.timeliness << " weeks";
  out << '\n';
  return kSuccess;
}

double to_double(const std::string &text, const std::string &key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("spec key '" + key + "' is not a number: '" + text + "'");
  }
}

Outbreak parse_outbreak(const std::string &text) {
  const std::size_t a = text.find('/');
  const std::size_t b = a == std::string::npos ? a : text.find('/', a + 1);
  if (b == std::string::npos) {
    throw std::invalid_argument("outbreak '" + text + "' must read START/DURATION/MULTIPLIER");
  }
  Outbreak o;
  o.start = parse_week_stamp(text.substr(0, a));
  o.duration_weeks = static_cast<int>(to_double(text.substr(a + 1, b - a - 1), "outbreak"));
  o.multiplier = to_double(text.substr(b + 1), "outbreak");
  return o;
}

}  // namespace

void RunConfig::validate() const {
  detector.validate();
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument("ci-level must lie in (0, 1)");
  }
}

SyntheticSpec read_synthetic_spec(const std::string &path) {
  std::ifstream probe = open_input(path);
  probe.close();
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error &e) {
    throw std::invalid_argument("cannot parse spec '" + path + "': " + e.what());
  }
  SyntheticSpec spec;
  for (const CLI::ConfigItem &item : items) {
    const std::string key = item.fullname();
    if (item.inputs.empty()) continue;
    const std::string &value = item.inputs.front();
    if (key == "outbreak") {
      for (const std::string &entry : item.inputs) spec.outbreaks.push_back(parse_outbreak(entry));
    } else if (key == "start_year") {
      spec.start_year = static_cast<int>(to_double(value, key));
    } else if (key == "years") {
      spec.years = static_cast<int>(to_double(value, key));
    } else if (key == "baseline_mean") {
      spec.baseline_mean = to_double(value, key);
    } else if (key == "seasonal_amplitude") {
      spec.seasonal_amplitude = to_double(value, key);
    } else if (key == "trend_per_year") {
      spec.trend_per_year = to_double(value, key);
    } else if (key == "dispersion") {
      spec.dispersion = to_double(value, key);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else {
      throw std::invalid_argument("unknown spec key '" + key + "' in " + path);
    }
  }
  spec.validate();
  return spec;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig config;
  DetectorConfig &det = config.detector;

  CLI::App app{"Return-level bound detection of time clusters in weekly counts", "evtwatch"};
  app.set_config("--config", "", "Flat key-value run configuration; flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--years-back,-b", det.window.years_back, "Years of history (b)");
  app.add_option("--half-width,-w", det.window.half_width, "Half window in weeks (w)");
  app.add_option("--t-min", det.t_min, "Smallest return period on the curve");
  app.add_option("--t-max", det.t_max, "Largest return period on the curve");
  app.add_option("--epsilon", det.grid.epsilon, "Lower edge of every exponent axis");
  app.add_option("--alpha-max", det.grid.alpha_max);
  app.add_option("--beta-max", det.grid.beta_max);
  app.add_option("--nu-max", det.grid.nu_max);
  app.add_option("--step", det.grid.step, "Exponent lattice spacing");
  app.add_option("--sporadic-min-cases", det.sporadic_min_cases);
  app.add_option("--sporadic-weeks", det.sporadic_weeks);
  app.add_option("--min-reference", det.min_reference, "Smallest usable reference sample");
  app.add_option("--ci-level", config.ci_level);
  CLI::Option *seed_opt = app.add_option("--seed", config.seed);

  DetectOptions detect_opt;
  CLI::App *detect = app.add_subcommand("detect", "Run prospective weekly detection");
  detect->add_option("--input,-i", detect_opt.input, "Series CSV year,week,count")->required();
  detect->add_option("--label", detect_opt.label);
  detect->add_option("--from", detect_opt.from, "First week, e.g. 2005-W01");
  detect->add_option("--to", detect_opt.to, "Last week");
  detect->add_option("--output,-o", detect_opt.output, "Alarm CSV")->required();
  detect->add_option("--flags-out", detect_opt.flags_out, "Per-week year,week,alarm CSV");
  detect->add_option("--diagnostics", detect_opt.diagnostics, "Skipped-week log");

  CurveOptions curve_opt;
  CLI::App *curve = app.add_subcommand("curve", "Export the return level curve for a week");
  curve->add_option("--input,-i", curve_opt.input)->required();
  curve->add_option("--label", curve_opt.label);
  curve->add_option("--week", curve_opt.week, "Current week, e.g. 2008-W52")->required();
  curve->add_option("--csv", curve_opt.csv);
  curve->add_option("--json", curve_opt.json);
  curve->add_option("--lower-csv", curve_opt.lower_csv, "Lower-bound curve, diagnostics");

  CompareOptions compare_opt;
  CLI::App *compare = app.add_subcommand("compare", "Concordance of two alarm flag series");
  compare->add_option("first", compare_opt.first, "Rows: year,week,alarm CSV")->required();
  compare->add_option("second", compare_opt.second, "Columns: year,week,alarm CSV")->required();
  compare->add_option("--json", compare_opt.json);

  SimulateOptions sim_opt;
  CLI::App *sim = app.add_subcommand("simulate", "Generate a synthetic series with outbreaks");
  sim->add_option("--spec", sim_opt.spec, "Simulation spec (key-value)")->required();
  sim->add_option("--series-out", sim_opt.series_out)->required();
  sim->add_option("--truth-out", sim_opt.truth_out)->required();

  ScoreOptions score_opt;
  CLI::App *score_cmd = app.add_subcommand("score", "Score alarm flags against outbreak truth");
  score_cmd->add_option("--alarms", score_opt.alarms, "year,week,alarm CSV")->required();
  score_cmd->add_option("--truth", score_opt.truth, "year,week,in_outbreak CSV")->required();
  score_cmd->add_option("--json", score_opt.json);

  std::vector<const char *> argv{"evtwatch"};
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    config.validate();
  } catch (const std::exception &e) {
    err << "evtwatch: invalid configuration: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (detect->parsed()) return cmd_detect(config, detect_opt, out, err);
    if (curve->parsed()) return cmd_curve(config, curve_opt, out);
    if (compare->parsed()) return cmd_compare(compare_opt, out);
    if (sim->parsed()) return cmd_simulate(config, seed_opt->count() > 0, sim_opt, out);
    if (score_cmd->parsed()) return cmd_score(score_opt, out);
  } catch (const UsageFailure &e) {
    err << "evtwatch: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument &e) {
    err << "evtwatch: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    err << "evtwatch: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace evtwatch::cli
