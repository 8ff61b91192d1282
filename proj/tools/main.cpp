// Command-line driver: thin argument parsing over ptor::cli::run.

#include <CLI11.hpp>

#include "ptor/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"C_p / R_p toolkit: grid and radial solvers for the "
               "torsion-to-frequency interpolation family"};
  app.require_subcommand(1);

  ptor::cli::RunConfig cfg;

  app.set_help_flag("--help", "print help");  // frees -h / --h for spacing

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--h", cfg.h, "grid spacing");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_option("--seed", cfg.seed, "RNG seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "grid C_p / R_p on a domain");
  solve->add_option("--domain", cfg.domain_file, "domain spec JSON file")
      ->required();
  solve->add_option("--p", cfg.p_list, "exponent p");
  solve->add_flag("--dump-field", cfg.dump_field, "write the solution CSV");
  add_common(solve);

  CLI::App* radial = app.add_subcommand("radial", "slab / ball ODE shooting");
  radial->add_option("--mode", cfg.mode, "slab or ball")->required();
  radial->add_option("--p", cfg.p_list, "exponent p")->required();
  radial->add_option("--n", cfg.n, "ball dimension");
  radial->add_option("--lambda", cfg.lambda, "slab multiplier");
  add_common(radial);

  CLI::App* phase = app.add_subcommand("phase", "energy level-set data");
  phase->add_option("--system", cfg.mode, "slab or ball")->required();
  phase->add_option("--p", cfg.p_list, "slab exponent");
  phase->add_option("--n", cfg.n, "ball dimension");
  phase->add_option("--lambda", cfg.lambda, "multiplier");
  phase->add_option("--variant", cfg.variant, "ball energy variant: paper or conserved");
  phase->add_option("--levels", cfg.levels, "energy levels")
      ->required()
      ->delimiter(',');
  phase->add_option("--window", cfg.window, "u_min,u_max,v_min,v_max")
      ->delimiter(',');
  phase->add_option("--resolution", cfg.resolution, "marching-squares grid");
  phase->add_flag("--emit-svg", cfg.emit_svg, "write phase.svg");
  add_common(phase);

  CLI::App* verify = app.add_subcommand("verify", "run the inequality suite");
  verify->add_option("--suite", cfg.suite, "suite name (default: all)");
  add_common(verify);

  CLI::App* exitwalk =
      app.add_subcommand("exitwalk", "walk-on-spheres exit-time oracle");
  exitwalk->add_option("--domain", cfg.domain_file, "domain spec JSON file")
      ->required();
  exitwalk->add_option("--points", cfg.points, "x,y pairs")->delimiter(',');
  exitwalk->add_option("--paths", cfg.paths, "Monte Carlo paths");
  exitwalk->add_option("--eps", cfg.eps, "shell width (default 1e-4 inradius)");
  exitwalk->add_flag("--compare", cfg.compare, "compare against the grid solve");
  add_common(exitwalk);

  CLI::App* sweep = app.add_subcommand("sweep", "p-grid / scaling sweeps");
  sweep->add_option("--domain", cfg.domain_file, "domain spec JSON file")
      ->required();
  sweep->add_option("--p-list", cfg.p_list, "exponents")->required()->delimiter(',');
  sweep->add_option("--r-list", cfg.r_list, "scale factors")->delimiter(',');
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message / help
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return ptor::cli::run(cfg);
}
