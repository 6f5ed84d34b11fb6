#include "fnlw/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fnlw {

namespace {

const char* kind_name(FitKind kind) {
  switch (kind) {
    case FitKind::exact_law: return "exact_law";
    case FitKind::upper_bound: return "upper_bound";
    case FitKind::report_only: return "report_only";
  }
  return "unknown";
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json run_json(const InvarianceRun& run) {
  Json rows = Json::array();
  for (const auto& r : run.rows)
    rows.push_back({{"observable", r.name},
                    {"mean_initial", r.mean_initial},
                    {"mean_final", r.mean_final},
                    {"pooled_se", r.pooled_se},
                    {"z", finite_or_null(r.z)},
                    {"paired_z", finite_or_null(r.paired_z)}});
  return {{"dt", run.dt}, {"max_abs_z", finite_or_null(run.max_abs_z)}, {"rows", rows}};
}

}  // namespace

Json provenance(const RunConfig& config, std::string_view command) {
  Json cfg = Json::object();
  for (const auto& key : RunConfig::keys()) {
    if (key == "workers" || key == "out") continue;
    cfg[key] = config.get(key);
  }
  return {{"command", std::string(command)}, {"code_version", kVersion}, {"config", cfg}};
}

Json to_json(const CauchyStudy& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"N", r.N},
                    {"exact_gap", r.exact_gap},
                    {"mc_gap", r.mc_gap},
                    {"mc_gap_squared", r.mc_gap_squared},
                    {"mc_gap_squared_se", r.mc_gap_squared_se}});
  return {{"alpha", s.alpha},
          {"m", s.m},
          {"N_max", s.N_max},
          {"samples", s.samples},
          {"master_seed", s.master_seed},
          {"fitted_slope", s.fitted_slope},
          {"fitted_slope_se", s.fitted_slope_se},
          {"theoretical_exponent", s.theoretical_exponent},
          {"in_theory", s.in_theory},
          {"rows", rows}};
}

Json to_json(const LowerBoundCheck& c) {
  return {{"samples", c.samples},
          {"violations", c.violations},
          {"bound", c.bound},
          {"max_negative_gn", c.max_negative_gn},
          {"passed", c.passed()}};
}

Json to_json(const TailStudy& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"lambda", r.lambda},
                    {"hits", r.hits},
                    {"probability", r.probability},
                    {"censored", r.censored}});
  Json fit = nullptr;
  if (s.fit_available)
    fit = {{"slope", s.fit.slope}, {"intercept", s.fit.intercept}, {"slope_se", s.fit.slope_se},
           {"points", s.fit.points}};
  return {{"alpha", s.ctx.alpha}, {"m", s.ctx.m},          {"N", s.ctx.N},
          {"sigma", s.ctx.sigma}, {"samples", s.samples},  {"master_seed", s.master_seed},
          {"bound", s.bound},     {"min_observed", s.min_observed},
          {"max_observed", s.max_observed},                {"monotone", s.monotone},
          {"fit", fit},           {"rows", rows}};
}

Json to_json(const std::vector<ChaosRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"p", r.p},
                   {"norm_p", r.norm_p},
                   {"norm_2", r.norm_2},
                   {"ratio", r.ratio},
                   {"bound", r.bound},
                   {"relative_se", r.relative_se},
                   {"passed", r.passed}});
  return out;
}

Json to_json(const DecayFit& f) {
  return {{"object", f.descriptor},
          {"slope", f.slope},
          {"slope_se", f.slope_se},
          {"points", f.points},
          {"samples", f.samples},
          {"theoretical", f.theoretical},
          {"tolerance", f.tolerance},
          {"kind", kind_name(f.kind)},
          {"alpha_threshold", f.alpha_threshold},
          {"in_theory", f.in_theory},
          {"mean_sup_norm", f.mean_sup_norm},
          {"exact_slope", finite_or_null(f.exact_slope)},
          {"passed", f.passed}};
}

Json to_json(const RegularityReport& r) {
  Json rows = Json::array();
  for (const auto& f : r.rows) rows.push_back(to_json(f));
  return {{"passed", r.passed()}, {"rows", rows}};
}

Json to_json(const ChainDiagnostics& d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.names.size(); ++i)
    rows.push_back({{"observable", d.names[i]},
                    {"iat", finite_or_null(d.iat[i])},
                    {"iat_infinite", std::isinf(d.iat[i])},
                    {"split_half_z", d.split_half_z[i]}});
  return {{"length", d.length}, {"acceptance_rate", d.acceptance_rate}, {"observables", rows}};
}

Json to_json(const WeightedEnsemble& e) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < e.names.size(); ++i)
    rows.push_back({{"observable", e.names[i]}, {"mean", e.mean[i]}, {"se", e.standard_error[i]}});
  return {{"samples", static_cast<long>(e.log_weights.size())},
          {"ess", e.ess},
          {"degenerate", e.degenerate},
          {"observables", rows}};
}

Json to_json(const InvarianceReport& r) {
  return {{"samples", r.samples},
          {"thin", r.thin},
          {"burnin", r.burnin},
          {"acceptance_rate", r.acceptance_rate},
          {"virial", {{"mean", finite_or_null(r.virial_mean)}, {"se", finite_or_null(r.virial_se)},
                      {"target", r.virial_target}, {"z", finite_or_null(r.virial_z)}}},
          {"stationary", r.stationary},
          {"pilot", to_json(r.pilot)},
          {"full_step", run_json(r.full_step)},
          {"half_step", run_json(r.half_step)},
          {"passed", r.passed}};
}

Json to_json(const PicardResult& r) {
  return {{"s", r.s},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"contraction_ratio", r.contraction_ratio},
          {"residual", r.residual},
          {"increments", r.increments}};
}

Json to_json(const ConsistencyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"dt", row.dt}, {"dt_quad", row.dt_quad}, {"gap", row.gap}, {"converged", row.converged}});
  return {{"T", r.T}, {"rows", rows}, {"ratios", r.ratios}};
}

Json to_json(const StrichartzReport& r) {
  return {{"p", finite_or_null(r.p)},
          {"p_infinite", std::isinf(r.p)},
          {"q", r.q},
          {"s", r.s},
          {"gamma", r.gamma},
          {"critical_index", r.critical_index},
          {"linf_hs", r.linf_hs},
          {"lp_wq", r.lp_wq}};
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return add(std::string(buf));
}

CsvTable& CsvTable::add(long value) { return add(std::to_string(value)); }

CsvTable& CsvTable::add(const std::string& value) {
  if (rows_.empty()) row();
  rows_.back().push_back(value);
  return *this;
}

std::string CsvTable::str() const {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
      if (!quote) {
        line += cells[i];
        continue;
      }
      line += '"';
      for (char c : cells[i]) line += c == '"' ? std::string("\"\"") : std::string(1, c);
      line += '"';
    }
    return line + '\n';
  };
  std::string out = join(header_);
  for (const auto& r : rows_) out += join(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

}  // namespace fnlw
