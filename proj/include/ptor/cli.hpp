#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ptor/exitwalk.hpp"
#include "ptor/io.hpp"
#include "ptor/radial.hpp"
#include "ptor/solver.hpp"
#include "ptor/suite.hpp"

namespace ptor::cli {

/// Parsed command-line request. One struct for all subcommands; unused
/// fields keep their defaults.
struct RunConfig {
  std::string command;  // solve | radial | phase | verify | exitwalk | sweep
  std::string domain_file;
  std::string out_dir = "out";
  double h = 1.0 / 64;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool emit_svg = false;
  bool dump_field = false;

  std::vector<double> p_list;  // solve/radial/phase take p_list[0]
  std::vector<double> r_list;  // sweep: scale factors

  // radial / phase
  std::string mode = "slab";   // slab | ball
  int n = 2;
  double lambda = 1.0;
  std::string variant = "paper";  // ball energy variant
  std::vector<double> levels;
  std::vector<double> window;  // u_min, u_max, v_min, v_max
  int resolution = 256;

  // verify
  std::string suite = "all";

  // exitwalk
  long paths = 100000;
  double eps = 0.0;
  std::vector<double> points;  // flat x, y pairs
  bool compare = false;
};

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline void write_json(const RunConfig& cfg, const std::string& name,
                       const json& j) {
  atomic_write(out_path(cfg, name), j.dump(2) + "\n");
}

/// Wall-clock metadata lives in its own file so the data artifacts are
/// byte-identical across reruns with the same config and seed.
inline void write_meta(const RunConfig& cfg) {
  json meta;
  meta["command"] = cfg.command;
  meta["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  write_json(cfg, "run_meta.json", meta);
}

inline double first_p(const RunConfig& cfg, double fallback) {
  return cfg.p_list.empty() ? fallback : cfg.p_list.front();
}

inline SolveOptions solver_options(const RunConfig& cfg) {
  SolveOptions opts;
  opts.tol = cfg.tol;
  return opts;
}

inline int run_solve(const RunConfig& cfg) {
  const DomainSpec domain = load_domain_file(cfg.domain_file);
  const double p = first_p(cfg, 2.0);
  MaskPtr mask = rasterize_shared(domain, cfg.h);
  const SolveOptions opts = solver_options(cfg);
  const SolveResult res =
      p == 1.0 ? solve_torsion(mask, opts) : solve_eigen(mask, p, opts);

  json report = solve_report_json(res, cfg.h);
  report["domain"] = domain_to_json(domain);
  report["volume"] = volume(*mask);
  report["inradius"] = inradius(*mask);
  write_json(cfg, "solve_report.json", report);
  if (cfg.dump_field) {
    atomic_write(out_path(cfg, "field.csv"), field_to_csv(res.calibrated_u));
  }
  std::printf("solve %s p=%g h=%g: c_p=%.10g r_p=%.10g residual=%.3g its=%d\n",
              kind_name(domain.kind), p, cfg.h, res.c_p, res.r_p,
              res.pde_residual, res.iterations);
  return 0;
}

inline int run_radial(const RunConfig& cfg) {
  const double p = first_p(cfg, 2.0);
  RadialProfile prof;
  if (cfg.mode == "slab") {
    prof = solve_slab(p, cfg.lambda, std::max(cfg.tol, 1e-12));
  } else if (cfg.mode == "ball") {
    prof = shoot_ball(cfg.n, p, std::max(cfg.tol, 1e-12));
  } else {
    fail(errc::invalid_argument, "radial: mode must be slab or ball");
  }
  write_json(cfg, "radial_report.json", profile_summary_json(prof));
  atomic_write(out_path(cfg, "radial_profile.csv"), profile_to_csv(prof));
  std::printf("radial %s n=%d p=%g: lambda=%.12g u_max=%.12g%s\n",
              cfg.mode.c_str(), prof.n, p, prof.lambda, prof.u_max,
              prof.n >= 2
                  ? (" c_p=" + std::to_string(radial_c_p(prof))).c_str()
                  : "");
  return 0;
}

inline int run_phase(const RunConfig& cfg) {
  PhaseSystem system;
  if (cfg.mode == "slab") {
    system = PhaseSystem::slab_energy;
  } else if (cfg.mode == "ball") {
    system = PhaseSystem::ball_critical_energy;
  } else {
    fail(errc::invalid_argument, "phase: system must be slab or ball");
  }
  PhaseParams params;
  params.p = first_p(cfg, system == PhaseSystem::slab_energy ? 1.5 : 6.0);
  params.n = cfg.n;
  params.lambda = cfg.lambda;
  params.variant = cfg.variant == "conserved" ? BallEnergyVariant::conserved
                                              : BallEnergyVariant::paper;
  if (cfg.levels.empty()) {
    fail(errc::invalid_argument, "phase: need at least one level");
  }
  PhaseWindow window;
  if (!cfg.window.empty()) {
    if (cfg.window.size() != 4) {
      fail(errc::invalid_argument,
           "phase: window must be u_min,u_max,v_min,v_max");
    }
    window = {cfg.window[0], cfg.window[1], cfg.window[2], cfg.window[3]};
  }
  const LevelSetData data =
      phase_portrait(system, params, cfg.levels, window, cfg.resolution);

  std::vector<std::string> files;
  for (std::size_t li = 0; li < data.levels.size(); ++li) {
    const std::string name = "level_" + std::to_string(li) + ".csv";
    files.push_back(name);
    atomic_write(out_path(cfg, name), level_curves_csv(data, li));
  }
  write_json(cfg, "phase_manifest.json", levelset_manifest(data, files));
  if (cfg.emit_svg) {
    atomic_write(out_path(cfg, "phase.svg"), levelset_svg(data));
  }
  std::printf("phase %s: %zu levels, max |E - level| = %.3g\n",
              cfg.mode.c_str(), data.levels.size(), level_set_max_defect(data));
  return 0;
}

inline int run_verify(const RunConfig& cfg) {
  CheckContext ctx;
  ctx.h = cfg.h;
  ctx.opts = solver_options(cfg);
  bool known = false;
  for (const auto& name : suite_names()) known = known || name == cfg.suite;
  if (!known) fail(errc::invalid_argument, "verify: unknown suite " + cfg.suite);

  const std::vector<CheckReport> reports = verify_suite(cfg.suite, ctx);
  json j;
  j["environment"]["h"] = ctx.h;
  j["environment"]["tol"] = ctx.opts.tol;
  j["environment"]["residual_tol"] = ctx.opts.residual_tol;
  j["environment"]["grid_tolerance"] = ctx.grid_tolerance;
  j["environment"]["seed"] = cfg.seed;
  j["environment"]["rng"] = kRngAlgorithm;
  json checks = json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    checks.push_back(check_to_json(r));
    all_pass = all_pass && r.pass;
    std::printf("[%s] %-55s margin=% .3e%s\n", r.pass ? "PASS" : "FAIL",
                r.claim_id.c_str(), r.margin,
                r.inconclusive ? " (inconclusive)" : "");
  }
  j["checks"] = checks;
  j["all_pass"] = all_pass;
  write_json(cfg, "verify_report.json", j);
  atomic_write(out_path(cfg, "verify_summary.csv"), checks_summary_csv(reports));
  std::printf("verify suite=%s: %zu checks, %s\n", cfg.suite.c_str(),
              reports.size(), all_pass ? "all pass" : "FAILURES");
  return all_pass ? 0 : 1;
}

inline int run_exitwalk(const RunConfig& cfg) {
  const DomainSpec domain = load_domain_file(cfg.domain_file);
  const double eps = cfg.eps > 0.0 ? cfg.eps : wos_default_eps(domain);
  std::vector<Point> pts;
  if (cfg.points.size() % 2 != 0) {
    fail(errc::invalid_argument, "exitwalk: points must be x,y pairs");
  }
  for (std::size_t i = 0; i + 1 < cfg.points.size(); i += 2) {
    pts.push_back({cfg.points[i], cfg.points[i + 1]});
  }
  if (pts.empty()) pts.push_back({0.0, 0.0});

  std::vector<ExitEstimate> ests;
  for (const Point& pt : pts) {
    ests.push_back(wos_exit_time(domain, pt, cfg.paths, eps, cfg.seed));
    std::printf("exitwalk (%g, %g): mean=%.8g se=%.3g paths=%ld\n", pt[0],
                pt[1], ests.back().mean, ests.back().std_error, cfg.paths);
  }
  atomic_write(out_path(cfg, "exitwalk.csv"), exit_estimates_csv(ests));
  json j;
  j["domain"] = domain_to_json(domain);
  j["eps"] = eps;
  j["paths"] = cfg.paths;
  j["seed"] = cfg.seed;
  j["rng"] = kRngAlgorithm;
  j["convention"] =
      "standard Brownian motion (generator Lap/2): mean solves Lap w + 2 = 0";
  json points = json::array();
  for (const auto& e : ests) {
    json pj;
    pj["point"] = {e.point[0], e.point[1]};
    pj["mean"] = e.mean;
    pj["std_error"] = e.std_error;
    points.push_back(pj);
  }
  j["estimates"] = points;
  int status = 0;
  if (cfg.compare) {
    const CheckReport cmp =
        compare_torsion(domain, pts, cfg.paths, cfg.seed, cfg.h, eps);
    j["comparison"] = check_to_json(cmp);
    std::printf("[%s] %s\n", cmp.pass ? "PASS" : "FAIL", cmp.claim_id.c_str());
    status = cmp.pass ? 0 : 1;
  }
  write_json(cfg, "exitwalk_report.json", j);
  return status;
}

inline int run_sweep(const RunConfig& cfg) {
  const DomainSpec domain = load_domain_file(cfg.domain_file);
  if (cfg.p_list.empty()) {
    fail(errc::invalid_argument, "sweep: need --p-list");
  }
  std::vector<double> scales = cfg.r_list;
  if (scales.empty()) scales.push_back(1.0);
  const SolveOptions opts = solver_options(cfg);

  std::ostringstream csv;
  csv.precision(17);
  csv << "p,r,h,lambda,c_p,r_p,u_max,residual,iterations\n";
  json rows = json::array();
  for (double r : scales) {
    const DomainSpec scaled = r == 1.0 ? domain : scale_domain(domain, r);
    MaskPtr mask = rasterize_shared(scaled, cfg.h * r);  // matched resolution
    for (double p : cfg.p_list) {
      const SolveResult res =
          p == 1.0 ? solve_torsion(mask, opts) : solve_eigen(mask, p, opts);
      csv << p << "," << r << "," << cfg.h * r << "," << res.lambda << ","
          << res.c_p << "," << res.r_p << "," << res.u_max << ","
          << res.pde_residual << "," << res.iterations << "\n";
      json row = solve_report_json(res, cfg.h * r);
      row["r"] = r;
      rows.push_back(row);
      std::printf("sweep p=%g r=%g: c_p=%.10g\n", p, r, res.c_p);
    }
  }
  atomic_write(out_path(cfg, "sweep.csv"), csv.str());
  json j;
  j["domain"] = domain_to_json(domain);
  j["rows"] = rows;
  write_json(cfg, "sweep_report.json", j);
  return 0;
}

}  // namespace detail

/// Execute one parsed command. Returns the process exit status: 0 on
/// success (and all checks passing), 1 on numerical failure (after writing
/// machine-readable error JSON), 2 on usage errors.
inline int run(const RunConfig& cfg) {
  try {
    detail::write_meta(cfg);
    if (cfg.command == "solve") return detail::run_solve(cfg);
    if (cfg.command == "radial") return detail::run_radial(cfg);
    if (cfg.command == "phase") return detail::run_phase(cfg);
    if (cfg.command == "verify") return detail::run_verify(cfg);
    if (cfg.command == "exitwalk") return detail::run_exitwalk(cfg);
    if (cfg.command == "sweep") return detail::run_sweep(cfg);
    std::fprintf(stderr, "unknown command: %s\n", cfg.command.c_str());
    return 2;
  } catch (const Error& e) {
    if (e.code() == errc::invalid_argument) {
      std::fprintf(stderr, "usage error: %s\n", e.what());
      return 2;
    }
    const json j = error_json(e);
    std::fprintf(stderr, "%s\n", j.dump(2).c_str());
    try {
      detail::write_json(cfg, "error.json", j);
    } catch (...) {
      // the error report is best-effort
    }
    return 1;
  }
}

}  // namespace ptor::cli
