// Command-line front end for the constant complex matrix-vector kernel
// compiler: compile | eval | verify | report | dot.

#include "cmvm/commands.hpp"

#include <iostream>
#include <string>

#include "CLI11.hpp"

int main(int argc, char** argv) {
  using namespace cmvm::cli;

  CLI::App app{"Constant complex matrix-vector kernel compiler"};
  app.require_subcommand(1);

  CompileOptions compile_opts;
  std::string compile_out;
  auto* compile_cmd =
      app.add_subcommand("compile", "Compile a problem file and list its operators");
  compile_cmd->add_option("--input", compile_opts.input, "Problem file (JSON)")
      ->required();
  compile_cmd->add_option("--out", compile_out, "Write kernel constants as JSON");

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate Y = A X, one \"re im\" line per row");
  eval_cmd->add_option("--input", eval_opts.input, "Problem file with a vector")
      ->required();
  eval_cmd->add_flag("--naive", eval_opts.naive, "Use the schoolbook product");

  VerifyOptions verify_opts;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check the compiled kernel against the schoolbook product");
  verify_cmd->add_option("--m-max", verify_opts.m_max, "Largest M")
      ->capture_default_str();
  verify_cmd->add_option("--n-max", verify_opts.n_max, "Largest even N")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify_opts.trials, "Instances per (M, N)")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_opts.seed, "Generator seed")
      ->capture_default_str();
  verify_cmd->add_flag("--perturb-c", verify_opts.perturb_c,
                       "Corrupt the stored constants (negative control)");

  ReportOptions report_opts;
  auto* report_cmd = app.add_subcommand("report", "Print hardware cost counts");
  report_cmd->add_option("--input", report_opts.input, "Problem file (JSON)")
      ->required();

  DotOptions dot_opts;
  auto* dot_cmd = app.add_subcommand("dot", "Write the dataflow graph as DOT");
  dot_cmd->add_option("--input", dot_opts.input, "Problem file (JSON)")
      ->required();
  dot_cmd->add_option("--out", dot_opts.out, "Output .dot path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (*compile_cmd) {
    if (!compile_out.empty()) compile_opts.out = compile_out;
    return cmd_compile(compile_opts, std::cout, std::cerr);
  }
  if (*eval_cmd) return cmd_eval(eval_opts, std::cout, std::cerr);
  if (*verify_cmd) return cmd_verify(verify_opts, std::cout, std::cerr);
  if (*report_cmd) return cmd_report(report_opts, std::cout, std::cerr);
  if (*dot_cmd) return cmd_dot(dot_opts, std::cout, std::cerr);
  return kUsageError;
}
