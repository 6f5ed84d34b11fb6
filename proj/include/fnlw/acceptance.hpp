#ifndef FNLW_ACCEPTANCE_HPP
#define FNLW_ACCEPTANCE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fnlw/config.hpp"
#include "fnlw/report.hpp"

namespace fnlw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  double seconds = 0.0;
  Json details;
};

/// 1..12.
std::vector<int> all_criteria();

/// Runs one acceptance criterion. Problem sizes are fixed per criterion;
/// `base` supplies the seed, worker count and tolerances.
CriterionResult run_criterion(int id, const RunConfig& base);

std::vector<CriterionResult> run_acceptance(
    const RunConfig& base, std::span<const int> ids,
    const std::function<void(const CriterionResult&)>& progress = {});

/// "[PASS]  3  Cauchy rate: ... (1.2 s)".
std::string format_criterion(const CriterionResult& result);

}  // namespace fnlw

#endif  // FNLW_ACCEPTANCE_HPP
