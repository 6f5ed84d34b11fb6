#include "fnlw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <variant>

#include "fnlw/defaults_text.hpp"
#include "fnlw/diagnostics.hpp"
#include "fnlw/grid.hpp"

namespace fnlw {

namespace {

const std::vector<std::string> kCommands{"sample",     "cauchy-rate", "tail",   "evolve",
                                         "invariance", "regularity",  "picard", "verify"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    if (text == "inf") return std::numeric_limits<T>::infinity();
  }
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

template <typename T>
std::string format_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

using Member = std::variant<double RunConfig::*, int RunConfig::*, long RunConfig::*,
                            std::uint64_t RunConfig::*, std::string RunConfig::*,
                            std::vector<double> RunConfig::*, std::vector<int> RunConfig::*,
                            double Tolerances::*>;

struct Binding {
  std::string key;
  Member member;
};

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table{
      {"version", &RunConfig::version},
      {"alpha", &RunConfig::alpha},
      {"m", &RunConfig::m},
      {"N", &RunConfig::N},
      {"grid", &RunConfig::grid},
      {"seed", &RunConfig::seed},
      {"samples", &RunConfig::samples},
      {"T", &RunConfig::T},
      {"dt", &RunConfig::dt},
      {"dt_quad", &RunConfig::dt_quad},
      {"workers", &RunConfig::workers},
      {"out", &RunConfig::out},
      {"input", &RunConfig::input},
      {"l", &RunConfig::l},
      {"k1", &RunConfig::k1},
      {"k", &RunConfig::k},
      {"k2", &RunConfig::k2},
      {"p", &RunConfig::p},
      {"q", &RunConfig::q},
      {"s", &RunConfig::s},
      {"beta", &RunConfig::beta},
      {"burnin", &RunConfig::burnin},
      {"thin", &RunConfig::thin},
      {"pilot", &RunConfig::pilot},
      {"chains", &RunConfig::chains},
      {"coupling", &RunConfig::coupling},
      {"lambda_grid", &RunConfig::lambda_grid},
      {"radii", &RunConfig::radii},
      {"n_max", &RunConfig::n_max},
      {"fit_lo", &RunConfig::fit_lo},
      {"fit_hi", &RunConfig::fit_hi},
      {"max_iters", &RunConfig::max_iters},
      {"picard_tol", &RunConfig::picard_tol},
      {"levels", &RunConfig::levels},
      {"store_every", &RunConfig::store_every},
      {"tol_slope_exact", &Tolerances::slope_exact},
      {"tol_slope_bound", &Tolerances::slope_bound},
      {"tol_slope_product", &Tolerances::slope_product},
      {"tol_cauchy_slack", &Tolerances::cauchy_slack},
      {"tol_z_max", &Tolerances::z_max},
      {"tol_degrade_slack", &Tolerances::degrade_slack},
      {"tol_split_half_z_max", &Tolerances::split_half_z_max},
      {"tol_chaos_slack", &Tolerances::chaos_slack},
      {"tol_hermite_relative", &Tolerances::hermite_relative},
      {"tol_reversibility", &Tolerances::reversibility},
      {"tol_quadratic_energy", &Tolerances::quadratic_energy},
      {"tol_hamiltonian_drift", &Tolerances::hamiltonian_drift},
      {"tol_min_order", &Tolerances::min_order},
      {"tol_refinement_ratio_low", &Tolerances::refinement_ratio_low},
      {"tol_refinement_ratio_high", &Tolerances::refinement_ratio_high},
      {"tol_ess_fraction", &Tolerances::ess_fraction},
  };
  return table;
}

const Binding& find_binding(std::string_view key) {
  for (const auto& b : bindings())
    if (b.key == key) return b;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

struct Line {
  std::string command;  // empty for plain keys
  std::string key;
  std::string value;
  int number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    Line out{"", "", std::string(trim(line.substr(eq + 1))), number};
    if (const auto dot = key.find('.'); dot != std::string_view::npos) {
      out.command = std::string(key.substr(0, dot));
      key = key.substr(dot + 1);
      if (std::find(kCommands.begin(), kCommands.end(), out.command) == kCommands.end())
        throw ConfigError("line " + std::to_string(number) + ": unknown command '" + out.command + "'");
    }
    out.key = std::string(key);
    find_binding(out.key);
    lines.push_back(std::move(out));
  }
  return lines;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const Binding& b = find_binding(key);
  std::visit(
      [&](auto member) {
        using M = decltype(member);
        if constexpr (std::is_same_v<M, double Tolerances::*>) {
          tol.*member = parse_number<double>(key, value);
        } else {
          auto& field = this->*member;
          using F = std::decay_t<decltype(field)>;
          if constexpr (std::is_same_v<F, std::string>)
            field = std::string(trim(value));
          else if constexpr (std::is_same_v<F, std::vector<double>>)
            field = parse_list<double>(key, value);
          else if constexpr (std::is_same_v<F, std::vector<int>>)
            field = parse_list<int>(key, value);
          else
            field = parse_number<F>(key, value);
        }
      },
      b.member);
}

std::string RunConfig::get(std::string_view key) const {
  const Binding& b = find_binding(key);
  return std::visit(
      [&](auto member) -> std::string {
        using M = decltype(member);
        if constexpr (std::is_same_v<M, double Tolerances::*>) {
          return format_double(tol.*member);
        } else {
          const auto& field = this->*member;
          using F = std::decay_t<decltype(field)>;
          if constexpr (std::is_same_v<F, std::string>)
            return field;
          else if constexpr (std::is_same_v<F, std::vector<double>> || std::is_same_v<F, std::vector<int>>)
            return format_list(field);
          else if constexpr (std::is_floating_point_v<F>)
            return format_double(field);
          else
            return std::to_string(field);
        }
      },
      b.member);
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> k;
    for (const auto& b : bindings()) k.push_back(b.key);
    return k;
  }();
  return out;
}

RunConfig RunConfig::parse(std::string_view text, std::string_view command, RunConfig base) {
  const auto lines = split_lines(text);
  for (const auto& line : lines)
    if (line.command.empty()) base.set(line.key, line.value);
  for (const auto& line : lines)
    if (!line.command.empty() && line.command == command) base.set(line.key, line.value);
  return base;
}

RunConfig RunConfig::load_file(const std::string& path, std::string_view command, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), command, std::move(base));
}

RunConfig RunConfig::defaults(std::string_view command) {
  return parse(detail::kDefaultsText, command, RunConfig{});
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& key : keys()) out += key + " = " + get(key) + "\n";
  return out;
}

int RunConfig::lattice_size() const {
  return grid > 0 ? grid : fft_size_at_least(GridSpec::minimal_size(N, m));
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  try {
    GridSpec{N, lattice_size(), alpha, m}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(grid >= 0, "grid must be >= 0 (0 selects the size automatically)");
  require(samples >= 1, "samples must be >= 1");
  require(T >= 0.0, "T must be >= 0");
  require(dt > 0.0, "dt must be > 0");
  require(dt_quad > 0.0, "dt_quad must be > 0");
  require(workers >= 0, "workers must be >= 0");
  require(l >= 1 && l <= 2 * m + 1, "l must satisfy 1 <= l <= 2m+1");
  require(k >= 1 && k <= 2 * m + 1, "k must satisfy 1 <= k <= 2m+1");
  require(k1 >= 0 && k1 <= k - 1, "k1 must satisfy 0 <= k1 <= k-1");
  require(k2 >= 0 && k2 <= k, "k2 must satisfy 0 <= k2 <= k");
  try {
    check_admissible(p, q);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  require(burnin >= 0, "burnin must be >= 0");
  require(thin >= 1, "thin must be >= 1");
  require(pilot >= 1000, "pilot must be >= 1000 sweeps");
  require(chains >= 1, "chains must be >= 1");
  require(n_max >= 1, "n_max must be >= 1");
  for (const int r : radii) require(r >= 0 && r < n_max, "radii must lie in [0, n_max)");
  require(fit_lo >= 1, "fit_lo must be >= 1");
  require(fit_hi >= 0, "fit_hi must be >= 0 (0 selects N - 2)");
  require(max_iters >= 1, "max_iters must be >= 1");
  require(picard_tol > 0.0, "picard_tol must be > 0");
  require(levels >= 2, "levels must be >= 2");
  require(store_every >= 1, "store_every must be >= 1");
  for (const auto& b : bindings())
    if (std::holds_alternative<double Tolerances::*>(b.member))
      require(tol.*std::get<double Tolerances::*>(b.member) > 0.0, b.key + " must be > 0");
  require(tol.refinement_ratio_low < tol.refinement_ratio_high,
          "tol_refinement_ratio_low must be below tol_refinement_ratio_high");
}

}  // namespace fnlw
