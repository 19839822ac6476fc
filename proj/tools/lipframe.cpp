#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lipframe/errors.hpp"
#include "lipframe/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certify, dualize and transform Lipschitz frames"};
  app.set_version_flag("--version", lipframe::kVersion);

  lipframe::RunConfig config;
  std::string command;
  app.add_option("command", command,
                 "certify | dual | similarity | orthogonality | interpolate | direct-sum | reconstruct-sweep")
      ->required();
  app.add_option("--fixture", config.fixture, "fixture id (disc:N=30, log:N=40,right=10, linear:U=..,V=.., orthopair) or frame file")
      ->required();
  app.add_option("--n-pairs", config.n_pairs, "sampled pairs for difference quotients")->capture_default_str();
  app.add_option("--n-probes", config.n_probes, "random probe vectors")->capture_default_str();
  app.add_option("--seed", config.seed, "sampling seed (LIPFRAME_SEED overrides)")->capture_default_str();
  app.add_option("--tol", config.tol, "pass/fail tolerance")->capture_default_str();
  app.add_option("--lambda", config.solver.damping, "damping of the frame-map inversion")->capture_default_str();
  app.add_option("--max-iter", config.solver.max_iter, "solver iteration cap")->capture_default_str();
  app.add_option("--residual-tol", config.solver.residual_tol, "solver residual tolerance")->capture_default_str();
  app.add_option("--out", config.out, "JSON report path");
  app.add_option("--csv", config.csv_out, "CSV path for reconstruct-sweep (default: --out with .csv)");
  app.add_option("--samples", config.samples, "sampled points for identity checks and sweeps")->capture_default_str();
  app.add_flag("--bessel-only", config.bessel_only, "certify only the Bessel constants");
  app.add_option("--partner", config.partner, "second frame for two-frame commands");
  app.add_option("--scale-fg", config.scale_fg, "similarity: x -> s x on M")->capture_default_str();
  app.add_option("--scale-tw", config.scale_tw, "similarity: s I on the ambient space")->capture_default_str();
  app.add_option("--a", config.interp_a, "interpolation scalar a")->capture_default_str();
  app.add_option("--b", config.interp_b, "interpolation scalar b")->capture_default_str();
  app.add_option("--c", config.interp_c, "interpolation scalar c")->capture_default_str();
  app.add_option("--d", config.interp_d, "interpolation scalar d")->capture_default_str();
  app.add_option("--n-values", config.n_values, "reconstruct-sweep truncation lengths")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.command = lipframe::parse_command(command);
    lipframe::apply_environment(config);
  } catch (const lipframe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return lipframe::execute(config, std::cout, std::cerr);
}
