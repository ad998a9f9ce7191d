#ifndef EVTWATCH_TOOLS_CLI_HPP_
#define EVTWATCH_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "evtwatch/detector.hpp"
#include "evtwatch/evaluation.hpp"

namespace evtwatch::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

// Settings shared by all commands.  Defaults follow the standard weekly
// protocol: 5 prior years, +/-3 weeks, t in 2..100, 5 cases in 4 weeks.
struct RunConfig {
  DetectorConfig detector;
  double ci_level = 0.95;
  std::uint64_t seed = 1;

  void validate() const;
};

// Parses a simulation spec in the same flat key-value format as the run
// configuration.  Outbreaks are given as `outbreak = ["2005-W20/6/4"]`
// (start week / duration in weeks / multiplier).
SyntheticSpec read_synthetic_spec(const std::string &path);

// Entry point shared by the executable and the tests.  args excludes the
// program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace evtwatch::cli

#endif  // EVTWATCH_TOOLS_CLI_HPP_
