#ifndef FNLW_REPORT_HPP
#define FNLW_REPORT_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fnlw/config.hpp"
#include "fnlw/diagnostics.hpp"
#include "fnlw/gaussian_measure.hpp"
#include "fnlw/mcmc.hpp"
#include "fnlw/picard.hpp"

namespace fnlw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// Command, code version and every config key except the worker count and
/// the output directory (neither affects results).
Json provenance(const RunConfig& config, std::string_view command);

Json to_json(const CauchyStudy& study);
Json to_json(const LowerBoundCheck& check);
Json to_json(const TailStudy& study);
Json to_json(const std::vector<ChaosRow>& rows);
Json to_json(const DecayFit& fit);
Json to_json(const RegularityReport& report);
Json to_json(const ChainDiagnostics& diagnostics);
Json to_json(const WeightedEnsemble& ensemble);
Json to_json(const InvarianceReport& report);
Json to_json(const PicardResult& result);
Json to_json(const ConsistencyReport& report);
Json to_json(const StrichartzReport& report);

/// Writes `doc` with 2-space indentation; doubles use the shortest
/// round-trip representation.
void write_json(const std::filesystem::path& path, const Json& doc);

/// Small CSV writer: numbers at 9 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row();
  CsvTable& add(double value);
  CsvTable& add(long value);
  CsvTable& add(int value) { return add(static_cast<long>(value)); }
  CsvTable& add(bool value) { return add(static_cast<long>(value)); }
  CsvTable& add(const std::string& value);
  CsvTable& add(const char* value) { return add(std::string(value)); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fnlw

#endif  // FNLW_REPORT_HPP
