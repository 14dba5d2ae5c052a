// Command-line driver: adaptive runs, norm comparison, norm-equivalence probe
// and the forcing/gradient oracles.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "dpg/adapt.hpp"
#include "dpg/error.hpp"
#include "dpg/normprobe.hpp"
#include "dpg/problems.hpp"
#include "dpg/reporting.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string problem = "ex1";
  double eps = 1e-2;
  int p = 1;
  std::string norm = "proposed";
  long budget = 200000;
  double fraction = 0.1;
  int dp = dpg::kDefaultEnrichment;
  int max_cycles = 30;
  int ex2_terms = 200;
  std::string out = "out";
  bool uniform = false;
  bool no_fields = false;
};

void add_run_options(CLI::App* app, RunArgs& a, bool with_norm) {
  app->add_option("--problem", a.problem, "Benchmark problem")
      ->check(CLI::IsMember({"ex1", "ex2", "ex3"}))
      ->capture_default_str();
  app->add_option("--eps", a.eps, "Diffusion coefficient")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--p", a.p, "Field polynomial degree")->check(CLI::NonNegativeNumber)->capture_default_str();
  if (with_norm)
    app->add_option("--norm", a.norm, "Test norm")
        ->check(CLI::IsMember({"proposed", "proposed-plain", "md", "qo"}))
        ->capture_default_str();
  app->add_option("--budget", a.budget, "Stop once the free dof count reaches this")->capture_default_str();
  app->add_option("--fraction", a.fraction, "Marked fraction of cells per cycle")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  app->add_option("--dp", a.dp, "Test space enrichment")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-cycles", a.max_cycles, "Cycle limit")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--terms", a.ex2_terms, "Series truncation of ex2")->capture_default_str();
  app->add_option("--out", a.out, "Output directory")->capture_default_str();
  app->add_flag("--uniform", a.uniform, "Refine every cell instead of the marked fraction");
  app->add_flag("--no-fields", a.no_fields, "Skip the per-cycle VTK/SVG files");
}

dpg::AdaptConfig make_config(const RunArgs& a) {
  dpg::AdaptConfig cfg;
  cfg.problem = a.problem == "ex2" ? dpg::example2(a.eps, a.ex2_terms) : dpg::make_problem(a.problem, a.eps);
  cfg.norm = dpg::parse_norm(a.norm);
  cfg.p = a.p;
  cfg.dp = a.dp;
  cfg.fraction = a.fraction;
  cfg.budget = a.budget;
  cfg.max_cycles = a.max_cycles;
  return cfg;
}

void print_header() {
  std::printf("%5s %8s %9s %13s %13s %13s %9s %9s %10s\n", "cycle", "cells", "dofs", "l2_u",
              "eps_l2_sigma", "eta", "u/sigma", "eta/u", "ms");
}

dpg::CycleObserver make_observer(const fs::path& dir, bool fields) {
  return [dir, fields](const dpg::CycleView& v) {
    const auto& r = v.record;
    std::printf("%5d %8d %9ld %13.6e %13.6e %13.6e %9.4f %9.4f %10.1f\n", r.cycle, r.n_cells,
                r.n_dofs, r.l2_u, r.eps_l2_sigma, r.eta, r.ratio_u_sigma, r.ratio_eta_u, r.wall_ms);
    std::fflush(stdout);
    if (!fields) return;
    const std::string c = std::to_string(r.cycle);
    dpg::write_mesh_vtk(dir / ("mesh_" + c + ".vtk"), v.mesh);
    dpg::write_mesh_svg(dir / ("mesh_" + c + ".svg"), v.mesh);
    dpg::write_solution_vtk(dir / ("solution_" + c + ".vtk"), v.mesh, v.solution, v.estimate);
  };
}

int cmd_run(const RunArgs& a) {
  const dpg::AdaptConfig cfg = make_config(a);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::printf("%s eps=%g p=%d norm=%s %s\n", a.problem.c_str(), a.eps, a.p, a.norm.c_str(),
              a.uniform ? "uniform" : "adaptive");
  print_header();
  const auto obs = make_observer(dir, !a.no_fields);
  const dpg::RunHistory h = a.uniform ? dpg::uniform_loop(cfg, obs) : dpg::adaptive_loop(cfg, obs);
  dpg::write_history_csv(dir / "history.csv", h);
  const auto rates = dpg::rate_table(h, a.uniform ? dpg::RateBasis::CellSize : dpg::RateBasis::Dofs);
  if (!rates.rows.empty() && rates.rows.back().rate)
    std::printf("last observed rate of l2_u: %.4f\n", *rates.rows.back().rate);
  std::printf("wrote %s\n", (dir / "history.csv").c_str());
  return 0;
}

int cmd_compare(const RunArgs& a) {
  const dpg::AdaptConfig cfg = make_config(a);
  const fs::path dir(a.out);
  std::printf("%s eps=%g p=%d: proposed vs md\n", a.problem.c_str(), a.eps, a.p);
  std::printf("proposed\n");
  print_header();
  auto obs_a = make_observer(dir / "proposed", !a.no_fields);
  dpg::RunHistory first = dpg::adaptive_loop(
      [&] { auto c = cfg; c.norm = dpg::NormVariant::Proposed; return c; }(), obs_a);
  std::printf("md\n");
  print_header();
  auto obs_b = make_observer(dir / "md", !a.no_fields);
  dpg::RunHistory second = dpg::adaptive_loop(
      [&] { auto c = cfg; c.norm = dpg::NormVariant::MD; return c; }(), obs_b);
  dpg::write_history_csv(dir / "proposed" / "history.csv", first);
  dpg::write_history_csv(dir / "md" / "history.csv", second);
  const dpg::NormComparison cmp = dpg::compare_runs(std::move(first), std::move(second));
  std::printf("%9s %13s %9s %13s\n", "dofs", "l2_u proposed", "dofs", "l2_u md");
  for (const auto& [i, j] : cmp.aligned) {
    const auto& r1 = cmp.first.records[i];
    const auto& r2 = cmp.second.records[j];
    std::printf("%9ld %13.6e %9ld %13.6e\n", r1.n_dofs, r1.l2_u, r2.n_dofs, r2.l2_u);
  }
  std::printf("final error ratio proposed/md: %.4f\n", cmp.final_error_ratio);
  return 0;
}

int cmd_probe(const std::vector<double>& eps_list, const std::vector<std::string>& norms, int mesh,
              int p, int dp, const std::string& out) {
  std::vector<dpg::NormVariant> variants;
  for (const auto& n : norms) variants.push_back(dpg::parse_norm(n));
  const dpg::ProbeReport rep = dpg::probe_sweep(variants, eps_list, mesh, p, dp);
  std::printf("%-15s %10s %14s %14s %14s\n", "norm", "eps", "lambda_min", "lambda_max", "ratio");
  for (const auto& r : rep.records)
    std::printf("%-15s %10.3g %14.6e %14.6e %14.6e\n", dpg::to_string(r.norm).c_str(), r.eps,
                r.lambda_min, r.lambda_max, r.ratio);
  const fs::path path = fs::path(out) / "probe.csv";
  dpg::write_probe_csv(path, rep);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& r : dpg::verify_examples()) {
    ok = ok && r.pass;
    std::printf("%s %s eps=%-5g forcing %.3e (tol %.0e)  gradient %.3e (tol %.0e)\n",
                r.pass ? "PASS" : "FAIL", r.problem.c_str(), r.eps, r.forcing, r.forcing_tol,
                r.gradient, r.gradient_tol);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive DPG solver for convection-diffusion in ultra-weak form"};
  app.set_config("--config", "", "TOML file with option values (command-line flags take precedence)");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Adaptive or uniform refinement run");
  add_run_options(run, run_args, true);

  RunArgs cmp_args;
  cmp_args.out = "out_compare";
  auto* compare = app.add_subcommand("compare", "Adaptive runs under the proposed and MD norms");
  add_run_options(compare, cmp_args, false);

  std::vector<double> eps_list{1.0, 0.1, 0.01, 0.001};
  std::vector<std::string> norm_list{"proposed-plain"};
  int probe_mesh = 4, probe_p = 1, probe_dp = dpg::kDefaultEnrichment;
  std::string probe_out = "out_probe";
  auto* probe = app.add_subcommand("probe", "Norm-equivalence constants of the field variables");
  probe->add_option("--eps-list", eps_list, "Comma-separated eps values")->delimiter(',')->capture_default_str();
  probe->add_option("--norm-list", norm_list, "Comma-separated test norms")->delimiter(',')->capture_default_str();
  probe->add_option("--mesh", probe_mesh, "Uniform n x n mesh of the unit square")->capture_default_str();
  probe->add_option("--p", probe_p, "Field polynomial degree")->capture_default_str();
  probe->add_option("--dp", probe_dp, "Test space enrichment")->capture_default_str();
  probe->add_option("--out", probe_out, "Output directory")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check closed-form forcings and gradients against finite differences");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) return cmd_run(run_args);
    if (*compare) return cmd_compare(cmp_args);
    if (*probe) return cmd_probe(eps_list, norm_list, probe_mesh, probe_p, probe_dp, probe_out);
    if (*verify) return cmd_verify();
  } catch (const dpg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
