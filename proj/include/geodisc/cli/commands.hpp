#pragma once

// Experiment commands. Each returns a Table whose rows all carry value,
// budget, method and pass columns; Table::ok is false iff a hard assertion
// failed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geodisc/cli/config.hpp"
#include "geodisc/designs.hpp"
#include "geodisc/discrepancy.hpp"
#include "geodisc/kernels.hpp"
#include "geodisc/spaces.hpp"

namespace geodisc::cli {

inline constexpr const char* version = "0.1.0";

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  bool ok = true;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width mismatch");
    rows.push_back(std::move(row));
  }
  [[nodiscard]] size_t column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
    return static_cast<size_t>(it - columns.begin());
  }
  [[nodiscard]] const std::string& cell(size_t row, const std::string& name) const { return rows.at(row)[column(name)]; }
};

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}
inline std::string fmt(size_t x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string config_hash(const ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.canonical())));
  return buf;
}

inline void write_csv(std::ostream& os, const Table& t, const ExperimentConfig& cfg) {
  os << "# geodisc " << version << "\n# command=" << t.command << "\n# config_hash=" << config_hash(cfg) << "\n";
  for (const auto& n : t.notes) os << "# " << n << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

inline nlohmann::ordered_json to_json(const Table& t, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["command"] = t.command;
  j["config_hash"] = config_hash(cfg);
  j["ok"] = t.ok;
  j["notes"] = t.notes;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline void emit(const Table& t, const ExperimentConfig& cfg, std::ostream& fallback) {
  if (cfg.out.empty()) {
    write_csv(fallback, t, cfg);
  } else {
    std::ofstream os(cfg.out);
    if (!os) throw config_error(cfg.out + ": cannot open output file");
    write_csv(os, t, cfg);
    if (!os) throw config_error(cfg.out + ": write failed");
  }
  if (!cfg.json.empty()) {
    std::ofstream os(cfg.json);
    if (!os) throw config_error(cfg.json + ": cannot open output file");
    os << to_json(t, cfg).dump(2) << "\n";
    if (!os) throw config_error(cfg.json + ": write failed");
  }
}

inline std::vector<Space> config_spaces(const ExperimentConfig& cfg) {
  std::vector<Space> out;
  for (const auto& s : cfg.spaces) out.push_back(parse_space(s));
  return out;
}

// ---- stolarsky ----------------------------------------------------------------------

inline Table cmd_stolarsky(const ExperimentConfig& cfg) {
  Table t;
  t.command = "stolarsky";
  t.columns = {"space", "N", "seed", "value", "budget", "method", "pass", "lambda", "tau_sum", "mean_tau_N2",
               "gamma", "L"};
  t.notes.push_back("value = gamma*lambda[sin] + tau[D_N] - <tau>*N^2; budget = gamma * series tail bound");
  for (const Space& s : config_spaces(cfg))
    for (int n : cfg.n_grid)
      for (auto seed : cfg.seeds) {
        const auto set = sample_set(s, static_cast<size_t>(n), seed);
        const auto r = stolarsky_residual(set, cfg.trunc_tol);
        const bool pass = r.pass();
        t.ok = t.ok && pass;
        const double n2 = static_cast<double>(n) * n;
        t.add({s.label(), fmt(n), fmt(seed), fmt(r.residual), fmt(r.budget), "series+distances", yes_no(pass),
               fmt(r.lambda), fmt(r.tau_sum), fmt(r.mean_tau * n2), fmt(r.gamma), fmt(r.L)});
      }
  return t;
}

// ---- scaling ----------------------------------------------------------------------------

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares line through (log x, log y).
inline SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw domain_error("loglog_fit: need at least two points");
  const size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw domain_error("loglog_fit: nonpositive value");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
    ss += e * e;
  }
  f.residual_rms = std::sqrt(ss / n);
  f.slope_stderr = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

inline PointSet scaling_set(const Space& s, const std::string& generator, int n, std::uint64_t seed) {
  if (generator == "spiral") return spiral_configuration(s, n);
  if (generator == "geodesic_orbit") return geodesic_orbit_configuration(s, n);
  return sample_set(s, static_cast<size_t>(n), seed);
}

inline Table cmd_scaling(const ExperimentConfig& cfg) {
  Table t;
  t.command = "scaling";
  t.columns = {"space", "generator", "N", "seed", "value", "budget", "method", "pass"};
  const WeightFunction w = parse_weight(cfg.weight);
  const bool natural = w.kind() == WeightKind::SinR;
  t.notes.push_back("value = lambda[" + w.describe() + ", D_N]; fit rows give the log-log slope in value and its standard error in budget");
  const bool random = cfg.generator == "random";
  const std::vector<std::uint64_t> seeds = random ? cfg.seeds : std::vector<std::uint64_t>{cfg.seeds.front()};
  for (const Space& s : config_spaces(cfg)) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (int n : cfg.n_grid) {
      double mean = 0.0;
      for (auto seed : seeds) {
        const auto set = scaling_set(s, cfg.generator, n, seed);
        double value = 0.0;
        double budget = 0.0;
        std::string method;
        if (natural) {
          value = lambda_natural_via_distances(set);
          budget = 1e-13 * static_cast<double>(n) * n;
          method = "distances";
        } else {
          const auto rep = quad_disc_series(set, w, cfg.trunc_tol);
          value = rep.value;
          budget = rep.tail_bound;
          method = "series";
        }
        mean += value / static_cast<double>(seeds.size());
        t.add({s.label(), cfg.generator, fmt(n), random ? fmt(seed) : "-", fmt(value), fmt(budget), method, "-"});
      }
      xs.push_back(n);
      ys.push_back(mean);
    }
    if (xs.size() >= 2) {
      const auto fit = loglog_fit(xs, ys);
      std::string pass = "-";
      if (cfg.slope_range) {
        const bool ok = fit.slope >= cfg.slope_range->first && fit.slope <= cfg.slope_range->second;
        t.ok = t.ok && ok;
        pass = yes_no(ok);
      }
      t.add({s.label(), cfg.generator, "fit", "-", fmt(fit.slope), fmt(fit.slope_stderr), "least-squares", pass});
      t.notes.push_back(s.label() + ": slope " + fmt(fit.slope) + ", residual rms " + fmt(fit.residual_rms));
    }
  }
  return t;
}

// ---- design-audit -------------------------------------------------------------------------

/// Union of `copies` randomly rotated cross polytopes on S^d (a 3-design).
inline PointSet rotated_cross_polytopes(const Space& s, int copies, std::uint64_t seed) {
  if (copies < 1) throw domain_error("rotated_cross_polytopes: need at least one copy");
  const PointSet base = cross_polytope_configuration(s);
  Rng rng = make_rng(seed, 7);
  PointSet out(s);
  for (int c = 0; c < copies; ++c) out.append(rotate_sphere_set(base, random_rotation(s.d + 1, rng)));
  return out;
}

/// name or name:param.
inline PointSet named_configuration(const Space& s, const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  int param = 0;
  if (colon != std::string::npos) param = detail::parse_number<int>(spec.substr(colon + 1), "configuration '" + spec + "': ");
  if (name == "rotated_cross_polytopes") {
    geodisc::detail::require_sphere(s, name);
    return rotated_cross_polytopes(s, param, seed);
  }
  return builtin_configuration(s, name, param, seed);
}

inline Table cmd_design_audit(const ExperimentConfig& cfg) {
  Table t;
  t.command = "design-audit";
  t.columns = {"space", "configuration", "N", "t", "t_verified", "value", "budget", "method", "pass", "nu",
               "scale_radius", "delta", "lambda", "phi_max_over_N2", "note"};
  t.notes.push_back("value = lambda[eta, D_N] / (t^(d-1) nu[D_N, L/t]^2); L = " + fmt(cfg.L_const));
  const WeightFunction w = parse_weight(cfg.weight);
  const auto spaces = config_spaces(cfg);
  struct Case {
    std::string label;
    PointSet set;
  };
  std::vector<Case> cases;
  if (!cfg.points.empty()) {
    std::ifstream is(cfg.points);
    if (!is) throw config_error(cfg.points + ": cannot open point file");
    cases.push_back({cfg.points, read_points(is, cfg.points)});
  }
  for (const Space& s : spaces)
    for (const auto& c : cfg.configurations) cases.push_back({c, named_configuration(s, c, cfg.seeds.front())});
  if (cases.empty()) throw config_error("design-audit needs a configuration or a point file");

  for (const auto& c : cases) {
    const PointSet& set = c.set;
    const Space& s = set.space();
    const int t_req = cfg.t > 0 ? cfg.t : design_strength(set, design_strength_ceiling, cfg.design_tol);
    const double n2 = static_cast<double>(set.size()) * set.size();
    if (t_req < 1) {
      t.ok = false;
      t.add({s.label(), c.label, fmt(set.size()), fmt(t_req), "0", "nan", "nan", "audit", "no", "-", "-",
             set.size() >= 2 ? fmt(separation(set)) : "-", "-", "-", "not a 1-design"});
      continue;
    }
    const auto a = design_bound_audit(set, t_req, w, cfg.L_const, cfg.design_tol, cfg.seeds.front());
    double phi_max = 0.0;
    for (int l = 1; l <= std::min(t_req, static_cast<int>(a.phi_values.size()) - 1); ++l)
      phi_max = std::max(phi_max, std::abs(a.phi_values[l]) / n2);
    const bool pass = !a.refused;
    t.ok = t.ok && pass;
    if (a.refused) {
      t.add({s.label(), c.label, fmt(a.N), fmt(t_req), fmt(a.t_verified), "nan", "nan", "audit", "no", "-", "-",
             fmt(a.delta), "-", fmt(phi_max), a.reason});
      continue;
    }
    const double denom = std::pow(t_req, s.d - 1) * static_cast<double>(a.nu_at_scale) * a.nu_at_scale;
    t.add({s.label(), c.label, fmt(a.N), fmt(t_req), fmt(a.t_verified), fmt(a.bound_ratio), fmt(a.lambda_tail / denom),
           "series+" + a.nu_scheme, "yes", fmt(a.nu_at_scale), fmt(a.scale_radius), fmt(a.delta), fmt(a.lambda),
           fmt(phi_max), "-"});
  }
  return t;
}

// ---- sampler-check ------------------------------------------------------------------------

/// Kolmogorov-Smirnov distance between the law of theta(x, y0), x uniform,
/// and r -> v_r.
inline double sampler_ks(const Space& s, size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, 3);
  const Point y0 = geodesic_point(s, 0.0);
  std::vector<double> th(samples);
  for (auto& v : th) v = geodesic_distance(sample_uniform(s, rng), y0);
  std::sort(th.begin(), th.end());
  double ks = 0.0;
  const double n = static_cast<double>(samples);
  for (size_t i = 0; i < samples; ++i) {
    const double F = ball_volume(s, th[i]);
    ks = std::max({ks, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
  }
  return ks;
}

inline Table cmd_sampler_check(const ExperimentConfig& cfg) {
  Table t;
  t.command = "sampler-check";
  t.columns = {"space", "samples", "seed", "value", "budget", "method", "pass"};
  t.notes.push_back("value = KS distance of theta(x, y0) against v_r; budget = ks_max");
  for (const Space& s : config_spaces(cfg))
    for (auto seed : cfg.seeds) {
      const double ks = sampler_ks(s, cfg.mc_samples, seed);
      const bool pass = ks < cfg.ks_max;
      t.ok = t.ok && pass;
      t.add({s.label(), fmt(cfg.mc_samples), fmt(seed), fmt(ks), fmt(cfg.ks_max), "kolmogorov-smirnov", yes_no(pass)});
    }
  return t;
}

// ---- kernel-eval ----------------------------------------------------------------------------

struct IdentityCheck {
  double deviation = 0.0;
  double budget = 0.0;
  [[nodiscard]] bool pass() const { return deviation <= budget; }
};

/// max over an n x n (r, t) grid of |lambda_r + theta_r - v_r v'_r| against 2 * tail.
inline IdentityCheck l1_invariance_check(const Space& s, int n, double tol) {
  IdentityCheck c;
  c.budget = std::numeric_limits<double>::infinity();
  double worst_ratio = -1.0;
  for (int i = 0; i < n; ++i) {
    const double r = pi * i / (n - 1);
    const auto e = radius_expansion(s, r, tol);
    const double v = ball_volume(s, r);
    const double vc = ball_volume_complement(s, r);
    for (int j = 0; j < n; ++j) {
      const auto [lam, th] = e.evaluate(pi * j / (n - 1));
      const double dev = std::abs(lam + th - v * vc);
      const double bud = 2.0 * e.tail_bound;
      const double ratio = bud > 0.0 ? dev / bud : (dev > 0.0 ? INFINITY : 0.0);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        c.deviation = dev;
        c.budget = bud;
      }
    }
  }
  return c;
}

/// max over t of |sin(t/2) - gamma theta^Delta(sin, t)| against gamma * tail.
inline IdentityCheck stolarsky_kernel_check(const Space& s, int n, double tol) {
  const auto e = weight_expansion(s, WeightFunction::sin_r(), tol);
  const double g = gamma_constant(s);
  IdentityCheck c;
  c.budget = g * e->tail_bound;
  for (int j = 0; j < n; ++j) {
    const double t = pi * j / (n - 1);
    c.deviation = std::max(c.deviation, std::abs(std::sin(0.5 * t) - g * e->evaluate(t).second));
  }
  return c;
}

/// |sum_l b_l - <theta^Delta(eta)>| (the kernel identity at t = 0) against the tail.
inline IdentityCheck weight_average_check(const Space& s, const WeightFunction& w, double tol) {
  const auto e = weight_expansion(s, w, tol);
  IdentityCheck c;
  c.deviation = std::abs(e->total() - average_theta_delta(s, w));
  c.budget = e->tail_bound;
  return c;
}

inline IdentityCheck chordal_check(const Space& s, int n) {
  IdentityCheck c;
  c.budget = 1e-12;
  for (int j = 0; j < n; ++j) {
    const double t = pi * j / (n - 1);
    c.deviation = std::max(c.deviation, std::abs(chordal_via_l1(s, t) - std::sin(0.5 * t)));
  }
  return c;
}

inline Table cmd_kernel_eval(const ExperimentConfig& cfg) {
  Table t;
  t.command = "kernel-eval";
  t.columns = {"space", "identity", "value", "budget", "method", "pass"};
  t.notes.push_back("value = max deviation of the identity over its grid; budget = certified series tail");
  const WeightFunction w = parse_weight(cfg.weight);
  for (const Space& s : config_spaces(cfg)) {
    auto row = [&](const std::string& name, const IdentityCheck& c, const std::string& method) {
      t.ok = t.ok && c.pass();
      t.add({s.label(), name, fmt(c.deviation), fmt(c.budget), method, yes_no(c.pass())});
    };
    row("l1-invariance", l1_invariance_check(s, 11, cfg.trunc_tol), "series");
    row("stolarsky-kernel", stolarsky_kernel_check(s, 11, cfg.trunc_tol), "series");
    row("weight-average:" + w.describe(), weight_average_check(s, w, cfg.trunc_tol), "series+quadrature");
    row("chordal-closed-form", chordal_check(s, 101), "closed-form");
  }
  return t;
}

// ---- sample ----------------------------------------------------------------------------------

inline PointSet cmd_sample(const ExperimentConfig& cfg) {
  const Space s = parse_space(cfg.spaces.front());
  if (!cfg.configurations.empty()) return named_configuration(s, cfg.configurations.front(), cfg.seeds.front());
  return sample_set(s, static_cast<size_t>(cfg.n_grid.front()), cfg.seeds.front());
}

}  // namespace geodisc::cli
