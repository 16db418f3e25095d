#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "geodisc/cli/commands.hpp"

namespace {

using namespace geodisc;
using namespace geodisc::cli;

struct Overrides {
  std::string config;
  std::vector<std::string> spaces;
  std::vector<int> n;
  std::string weight;
  std::optional<double> trunc_tol;
  std::optional<std::size_t> mc_samples;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string json;
  std::string generator;
  std::vector<std::string> configurations;
  std::string points;
  std::optional<int> t;
  std::optional<double> L;
  std::optional<double> design_tol;
  std::optional<double> ks_max;
  std::vector<double> slope_range;
};

void add_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key = value config file");
  sub->add_option("--space", o.spaces, "space(s), e.g. S2, CP2, OP2")->delimiter(',');
  sub->add_option("--n", o.n, "N grid")->delimiter(',');
  sub->add_option("--weight", o.weight, "sin | const | indicator:r | file:path");
  sub->add_option("--trunc-tol", o.trunc_tol, "series truncation tolerance");
  sub->add_option("--mc-samples", o.mc_samples, "Monte Carlo sample count");
  sub->add_option("--seed", o.seeds, "seed(s)")->delimiter(',');
  sub->add_option("--out", o.out, "output path (CSV, or points for 'sample')");
  sub->add_option("--json", o.json, "JSON mirror of the result table");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = apply_config(parse_config_file(o.config));
  if (!o.spaces.empty()) cfg.spaces = o.spaces;
  if (!o.n.empty()) cfg.n_grid = o.n;
  if (!o.weight.empty()) cfg.weight = o.weight;
  if (o.trunc_tol) cfg.trunc_tol = *o.trunc_tol;
  if (o.mc_samples) cfg.mc_samples = *o.mc_samples;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.json.empty()) cfg.json = o.json;
  if (!o.generator.empty()) cfg.generator = o.generator;
  if (!o.configurations.empty()) cfg.configurations = o.configurations;
  if (!o.points.empty()) cfg.points = o.points;
  if (o.t) cfg.t = *o.t;
  if (o.L) cfg.L_const = *o.L;
  if (o.design_tol) cfg.design_tol = *o.design_tol;
  if (o.ks_max) cfg.ks_max = *o.ks_max;
  if (!o.slope_range.empty()) {
    if (o.slope_range.size() != 2 || !(o.slope_range[0] < o.slope_range[1]))
      throw config_error("--slope-range needs two increasing numbers");
    cfg.slope_range = std::pair{o.slope_range[0], o.slope_range[1]};
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrepancy and invariance experiments on two-point homogeneous spaces"};
  app.set_version_flag("--version", std::string("geodisc ") + version);
  app.require_subcommand(1);
  Overrides o;

  auto* stolarsky = app.add_subcommand("stolarsky", "Stolarsky invariance residuals on random sets");
  auto* scaling = app.add_subcommand("scaling", "log-log slope of lambda[eta, D_N] against N");
  auto* audit = app.add_subcommand("design-audit", "t-design verification and the design bound ratio");
  auto* sampler = app.add_subcommand("sampler-check", "KS test of the uniform sampler against v_r");
  auto* kernel = app.add_subcommand("kernel-eval", "kernel identity tables");
  auto* sample = app.add_subcommand("sample", "write a point set");
  for (auto* sub : {stolarsky, scaling, audit, sampler, kernel, sample}) add_options(sub, o);
  scaling->add_option("--generator", o.generator, "random | spiral | geodesic_orbit");
  scaling->add_option("--slope-range", o.slope_range, "assert the fitted slope lies in [lo, hi]")->delimiter(',');
  audit->add_option("--configuration", o.configurations, "built-in configuration(s), name or name:param")->delimiter(',');
  audit->add_option("--points", o.points, "point file to audit");
  audit->add_option("--t", o.t, "design strength to audit (default: largest verified)");
  audit->add_option("--L", o.L, "scale constant L of the covering radius L/t");
  audit->add_option("--design-tol", o.design_tol, "design tolerance relative to N^2");
  sampler->add_option("--ks-max", o.ks_max, "KS threshold");
  sample->add_option("--configuration", o.configurations, "built-in configuration instead of random points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    if (sample->parsed()) {
      const PointSet set = cmd_sample(cfg);
      if (cfg.out.empty()) {
        write_points(std::cout, set);
      } else {
        std::ofstream os(cfg.out);
        if (!os) throw config_error(cfg.out + ": cannot open output file");
        write_points(os, set);
      }
      return 0;
    }
    Table table;
    if (stolarsky->parsed()) table = cmd_stolarsky(cfg);
    else if (scaling->parsed()) table = cmd_scaling(cfg);
    else if (audit->parsed()) table = cmd_design_audit(cfg);
    else if (sampler->parsed()) table = cmd_sampler_check(cfg);
    else table = cmd_kernel_eval(cfg);
    emit(table, cfg, std::cout);
    if (!table.ok) {
      std::cerr << "geodisc: " << table.command << ": assertion failed\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "geodisc: error: " << e.what() << "\n";
    return 2;
  }
}
