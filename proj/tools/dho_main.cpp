#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dho/commands.hpp"
#include "dho/config.hpp"
#include "dho/errors.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string lambda;
  std::string omega;
  int grid_n = -1;
  std::string grid_l;
  std::string form;
  int levels = -1;
  std::string out_dir;
  bool json = false;
};

// File values load first, explicitly passed flags override them.
dho::RunConfig resolve_config(const CliOptions& opts) {
  dho::RunConfig config;
  if (!opts.config_path.empty()) config = dho::load_config_file(opts.config_path, config);
  if (!opts.lambda.empty()) config.lambda = dho::Rational::parse(opts.lambda);
  if (!opts.omega.empty()) config.omega = dho::Rational::parse(opts.omega);
  if (opts.grid_n >= 0) config.grid_n = opts.grid_n;
  if (!opts.grid_l.empty()) config.grid_l = dho::Rational::parse(opts.grid_l);
  if (!opts.form.empty()) config.form = dho::parse_form(opts.form);
  if (opts.levels >= 0) config.levels = opts.levels;
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  config.json_to_stdout = opts.json;
  return config;
}

// "a:b:step" with exact rational endpoints
void parse_sweep(const std::string& text, dho::Rational& from, dho::Rational& to,
                 dho::Rational& step) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw dho::ConfigError("--lambda-sweep expects a:b:step");
  from = dho::Rational::parse(text.substr(0, c1));
  to = dho::Rational::parse(text.substr(c1 + 1, c2 - c1 - 1));
  step = dho::Rational::parse(text.substr(c2 + 1));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for the non-Hermitian damped harmonic oscillator"};
  app.require_subcommand(1);

  CliOptions opts;
  app.add_option("--config", opts.config_path, "key=value config file");
  app.add_option("--lambda", opts.lambda, "damping rate (exact rational or decimal)");
  app.add_option("--omega", opts.omega, "natural frequency");
  app.add_option("--grid-n", opts.grid_n, "grid points N");
  app.add_option("--grid-l", opts.grid_l, "grid half-width L");
  app.add_option("--form", opts.form, "matrix construction form: eq2 | eq5");
  app.add_option("--levels", opts.levels, "trusted level count k");
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_flag("--json", opts.json, "also print JSON reports to stdout");

  CLI::App* verify = app.add_subcommand("verify-identities", "exact symbolic operator suite");
  std::string sweep;
  std::string dump_matrix;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "diagonalize the discretized Hamiltonian and match levels");
  spectrum->add_option("--lambda-sweep", sweep, "loop spectrum over lambda = a:b:step");
  spectrum->add_option("--dump-matrix", dump_matrix, "export the assembled matrix to this file");
  CLI::App* gauge = app.add_subcommand("gauge-check", "grid-level gauge similarity transform");
  CLI::App* evolve = app.add_subcommand("evolve", "Crank-Nicolson norm-growth run");
  CLI::App* classical = app.add_subcommand("classical", "classical trajectory cross-checks");
  CLI::App* check_op =
      app.add_subcommand("check-op", "compare two operator expressions: <expr> == <expr>");
  std::vector<std::string> op_args;
  check_op->add_option("exprs", op_args, "left == right")->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    dho::RunConfig config = resolve_config(opts);
    if (verify->parsed()) return dho::cmd_verify_identities(config, std::cout);
    if (spectrum->parsed()) {
      config.dump_matrix_path = dump_matrix;
      if (!sweep.empty()) {
        dho::Rational from, to, step;
        parse_sweep(sweep, from, to, step);
        return dho::cmd_lambda_sweep(config, from, to, step, std::cout);
      }
      return dho::cmd_spectrum(config, std::cout);
    }
    if (gauge->parsed()) return dho::cmd_gauge_check(config, std::cout);
    if (evolve->parsed()) return dho::cmd_evolve(config, std::cout);
    if (classical->parsed()) return dho::cmd_classical(config, std::cout);
    if (check_op->parsed()) {
      std::string joined;
      for (const std::string& a : op_args) {
        if (!joined.empty()) joined += " ";
        joined += a;
      }
      const std::size_t sep = joined.find("==");
      if (sep == std::string::npos || joined.find("==", sep + 2) != std::string::npos) {
        std::cerr << "check-op: expected exactly one '==' between two expressions\n";
        return 2;
      }
      return dho::cmd_check_op(config, joined.substr(0, sep), joined.substr(sep + 2), std::cout);
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const dho::ParseError& e) {
    std::cerr << "operator expression error: " << e.what() << "\n";
    return 2;
  } catch (const dho::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 2;
  } catch (const dho::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
