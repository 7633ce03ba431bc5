#include "proxkit_cli/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  namespace cli = proxkit::cli;

  CLI::App app{"proxkit: proximal gradient toolkit"};
  app.require_subcommand(1);

  cli::RunOptions run;
  std::string run_file, trace_file, step;
  std::size_t max_iter = 0;
  double tol = 0.0;
  auto* run_cmd = app.add_subcommand("run", "solve a problem file");
  run_cmd->add_option("file", run_file, "problem file (JSON)")->required();
  auto* max_iter_opt = run_cmd->add_option("--max-iter", max_iter, "override solver.max_iter")
                           ->check(CLI::PositiveNumber);
  auto* tol_opt = run_cmd->add_option("--tol", tol, "override solver.tol")->check(CLI::PositiveNumber);
  auto* step_opt = run_cmd->add_option("--step", step, "constant step gamma, or auto");
  auto* trace_opt = run_cmd->add_option("--trace", trace_file, "write the iteration trace as CSV");

  cli::CheckOptions check;
  std::string check_file;
  auto* check_cmd = app.add_subcommand("check", "verify a problem against independent oracles");
  check_cmd->add_option("file", check_file, "problem file (JSON)")->required();
  check_cmd->add_flag("--corrupt-prox", check.corrupt_prox)->group("");  // test hook

  std::string norms_file;
  auto* norms_cmd = app.add_subcommand("norms", "print operator norms and the Lipschitz constant");
  norms_cmd->add_option("file", norms_file, "problem file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitIoOrParse;
  }

  try {
    if (*run_cmd) {
      run.problem = run_file;
      if (*max_iter_opt) run.max_iter = max_iter;
      if (*tol_opt) run.tol = tol;
      if (*step_opt) run.step = step;
      if (*trace_opt) run.trace = trace_file;
      return cli::run_command(run, std::cout, std::cerr);
    }
    if (*check_cmd) {
      check.problem = check_file;
      return cli::check_command(check, std::cout, std::cerr);
    }
    return cli::norms_command(norms_file, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitIoOrParse;
  }
}
