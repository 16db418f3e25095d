#pragma once

// Experiment configuration: flat key = value text with [sections], plus
// command-line overrides. Errors carry source:line diagnostics.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodisc/jacobi.hpp"
#include "geodisc/spaces.hpp"

namespace geodisc::cli {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Raw parsed file: section.key -> (value, line).
struct RawConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string source = "<config>";
  std::map<std::string, Entry> entries;
};

inline RawConfig parse_config_text(std::istream& is, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (const auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw config_error(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error(where + "missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (raw.entries.count(full)) throw config_error(where + "duplicate key '" + full + "'");
    raw.entries[full] = {value, lineno};
  }
  return raw;
}

inline RawConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error(path + ": cannot open config file");
  return parse_config_text(is, path);
}

/// Parses sin | const | indicator:<r> | file:<path> (two columns r, eta).
inline WeightFunction parse_weight(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "sin") return WeightFunction::sin_r();
  if (s == "const") return WeightFunction::constant();
  if (s.rfind("indicator:", 0) == 0) {
    double r = 0.0;
    try {
      size_t used = 0;
      r = std::stod(s.substr(10), &used);
      if (used != s.size() - 10) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw config_error("weight '" + s + "': bad radius");
    }
    if (!(r > 0.0)) throw config_error("weight '" + s + "': radius must be positive");
    return WeightFunction::indicator(r);
  }
  if (s.rfind("file:", 0) == 0) {
    const std::string path = s.substr(5);
    std::ifstream is(path);
    if (!is) throw config_error(path + ": cannot open weight table");
    std::vector<double> r;
    std::vector<double> eta;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      for (char& c : line)
        if (c == ',') c = ' ';
      if (trim(line).empty()) continue;
      std::istringstream ls(line);
      double a = 0.0;
      double b = 0.0;
      if (!(ls >> a >> b)) throw config_error(path + ":" + std::to_string(lineno) + ": expected two numbers");
      r.push_back(a);
      eta.push_back(b);
    }
    try {
      return WeightFunction::tabulated(std::move(r), std::move(eta));
    } catch (const std::exception& e) {
      throw config_error(path + ": " + e.what());
    }
  }
  throw config_error("unknown weight '" + s + "' (expected sin, const, indicator:r or file:path)");
}

struct ExperimentConfig {
  std::vector<std::string> spaces{"S2"};
  std::string weight = "sin";
  std::vector<int> n_grid{100};
  std::vector<std::uint64_t> seeds{1};
  double trunc_tol = 1e-4;
  std::size_t mc_samples = 10000;
  std::string out;
  std::string json;
  // command specific
  std::string generator = "random";
  std::vector<std::string> configurations;
  std::string points;
  int t = 0;
  double design_tol = 1e-9;
  double L_const = 4.0;
  double ks_max = 0.02;
  std::optional<std::pair<double, double>> slope_range;

  /// Canonical text used for the config hash.
  [[nodiscard]] std::string canonical() const {
    std::ostringstream os;
    os.precision(17);
    auto list = [&](const auto& v) {
      std::string s;
      for (const auto& x : v) {
        std::ostringstream e;
        e.precision(17);
        e << x;
        s += (s.empty() ? "" : ",") + e.str();
      }
      return s;
    };
    os << "spaces=" << list(spaces) << "\nweight=" << weight << "\nn=" << list(n_grid) << "\nseeds=" << list(seeds)
       << "\ntrunc_tol=" << trunc_tol << "\nmc_samples=" << mc_samples << "\ngenerator=" << generator
       << "\nconfigurations=" << list(configurations) << "\npoints=" << points << "\nt=" << t
       << "\ndesign_tol=" << design_tol << "\nL_const=" << L_const << "\nks_max=" << ks_max << "\nslope_range=";
    if (slope_range) os << slope_range->first << "," << slope_range->second;
    os << "\n";
    return os.str();
  }

  void validate() const {
    if (spaces.empty()) throw config_error("no space given");
    for (const auto& s : spaces) {
      try {
        (void)parse_space(s);
      } catch (const std::exception& e) {
        throw config_error("space '" + s + "': " + e.what());
      }
    }
    (void)parse_weight(weight);
    if (n_grid.empty()) throw config_error("empty N grid");
    for (size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] <= 0) throw config_error("N grid entries must be positive");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw config_error("N grid must be strictly increasing");
    }
    if (seeds.empty()) throw config_error("no seed given");
    if (!(trunc_tol > 0.0)) throw config_error("trunc_tol must be positive");
    if (mc_samples == 0) throw config_error("mc_samples must be positive");
    if (!(design_tol > 0.0)) throw config_error("design_tol must be positive");
    if (!(L_const > 0.0)) throw config_error("L must be positive");
    if (!(ks_max > 0.0)) throw config_error("ks_max must be positive");
    if (t < 0) throw config_error("t must be nonnegative");
    if (generator != "random" && generator != "spiral" && generator != "geodesic_orbit")
      throw config_error("generator must be random, spiral or geodesic_orbit");
  }
};

namespace detail {

template <class T>
T parse_number(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(text, &used);
    } else if constexpr (std::is_same_v<T, int>) {
      v = std::stoi(text, &used);
    } else {
      if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
      v = static_cast<T>(std::stoull(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error(where + "bad number '" + text + "'");
  }
}

template <class T>
std::vector<T> parse_number_list(const std::string& text, const std::string& where) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(item, where));
  if (out.empty()) throw config_error(where + "empty list");
  return out;
}

}  // namespace detail

/// Applies a parsed file on top of the defaults. Keys may appear at top level
/// or in any section; the section name is ignored apart from diagnostics.
inline ExperimentConfig apply_config(const RawConfig& raw, ExperimentConfig cfg = {}) {
  for (const auto& [full, entry] : raw.entries) {
    const auto dot = full.rfind('.');
    const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
    const std::string where = raw.source + ":" + std::to_string(entry.line) + ": ";
    const std::string& v = entry.value;
    if (key == "space" || key == "spaces") {
      cfg.spaces = split_list(v);
      if (cfg.spaces.empty()) throw config_error(where + "empty space list");
    } else if (key == "weight") {
      cfg.weight = v;
      try {
        (void)parse_weight(v);
      } catch (const std::exception& e) {
        throw config_error(where + e.what());
      }
    } else if (key == "n") {
      cfg.n_grid = detail::parse_number_list<int>(v, where);
    } else if (key == "seed" || key == "seeds") {
      cfg.seeds = detail::parse_number_list<std::uint64_t>(v, where);
    } else if (key == "trunc_tol") {
      cfg.trunc_tol = detail::parse_number<double>(v, where);
    } else if (key == "mc_samples") {
      cfg.mc_samples = detail::parse_number<std::uint64_t>(v, where);
    } else if (key == "out") {
      cfg.out = v;
    } else if (key == "json") {
      cfg.json = v;
    } else if (key == "generator") {
      cfg.generator = v;
    } else if (key == "configuration" || key == "configurations") {
      cfg.configurations = split_list(v);
    } else if (key == "points") {
      cfg.points = v;
    } else if (key == "t") {
      cfg.t = detail::parse_number<int>(v, where);
    } else if (key == "design_tol") {
      cfg.design_tol = detail::parse_number<double>(v, where);
    } else if (key == "L") {
      cfg.L_const = detail::parse_number<double>(v, where);
    } else if (key == "ks_max") {
      cfg.ks_max = detail::parse_number<double>(v, where);
    } else if (key == "slope_range") {
      const auto r = detail::parse_number_list<double>(v, where);
      if (r.size() != 2 || !(r[0] < r[1])) throw config_error(where + "slope_range needs two increasing numbers");
      cfg.slope_range = std::pair{r[0], r[1]};
    } else {
      throw config_error(where + "unknown key '" + key + "'");
    }
    try {
      cfg.validate();
    } catch (const config_error& e) {
      throw config_error(where + e.what());
    }
  }
  return cfg;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace geodisc::cli
