#ifndef FNLW_COMMANDS_HPP
#define FNLW_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fnlw/config.hpp"
#include "fnlw/picard.hpp"
#include "fnlw/report.hpp"

namespace fnlw {

struct CommandResult {
  bool passed = true;
  Json report;  // also written to <out>/<command>.json
};

const std::vector<std::string>& command_names();

/// First and second order Picard solves on one sample, the residual ratio
/// under halving of dt_quad and the direct-flow consistency study.
struct PicardStudy {
  PicardResult first, second, coarse_first;
  double residual_ratio = 0.0;
  double expansion_gap = 0.0;  // max_j ||z2 + w2 - w||_{L2}
  ConsistencyReport consistency;
  bool contraction_ok = false;
  bool residual_ok = false;
  bool consistency_ok = false;
  bool passed() const { return contraction_ok && residual_ok && consistency_ok; }
};

PicardStudy picard_study(const RunConfig& config);

/// Runs one command with a validated config, writing <out>/<command>.json and
/// <out>/<command>.csv (plus snapshots for sample/evolve). A one-line summary
/// per check goes to `log`. Throws ConfigError for an unusable config.
CommandResult run_command(std::string_view command, const RunConfig& config, std::ostream& log);

}  // namespace fnlw

#endif  // FNLW_COMMANDS_HPP
