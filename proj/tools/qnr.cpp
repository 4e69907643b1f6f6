#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qnr::cli;

  CLI::App app{"Numerical ranges of quadratic operators"};
  app.set_config("--config", "", "TOML config file (flags win on conflict)");
  app.set_version_flag("--version", qnr::kVersion);
  app.require_subcommand(1);

  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "omit the provenance timestamp");

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "compare W(A) with the quadratic prediction");
  a->add_option("input", analyze.input, "matrix JSON file")->required();
  a->add_option("--angles", analyze.angles, "number of support directions")->capture_default_str();
  a->add_option("--oracle", analyze.oracle, "random unit vectors (0 disables)")->capture_default_str();
  a->add_option("--seed", analyze.seed)->capture_default_str();
  a->add_option("--report", analyze.report, "report JSON path (stdout if omitted)");
  a->add_option("--boundary", analyze.boundary, "support table CSV path");
  a->add_option("--tol", analyze.tol, "quadratic residual tolerance")->capture_default_str();
  a->add_flag("--no-timestamp", no_timestamp);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "write a model operator matrix");
  g->add_option("family", gen.family, "composition | hankel | cauchy-circle | canonical")->required();
  g->add_option("--p", gen.p, "disc point for composition, e.g. 0.5 or 0.3+0.2i")->capture_default_str();
  g->add_option("--beta", gen.beta)->capture_default_str();
  g->add_option("--lambda", gen.lambda, "two eigenvalues, comma separated")->capture_default_str();
  g->add_option("--x", gen.x, "off-diagonal values, comma separated")->capture_default_str();
  g->add_option("--dims", gen.dims, "multiplicities of lambda1,lambda2")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--size", gen.size)->capture_default_str();
  g->add_option("--out", gen.out, "output matrix JSON")->required();

  SweepOptions sweep;
  std::string sizes_text;
  auto* s = app.add_subcommand("sweep", "finite-section convergence table");
  s->add_option("family", sweep.family, "composition | hankel | cauchy-circle")->required();
  s->add_option("--p", sweep.p)->capture_default_str();
  s->add_option("--beta", sweep.beta)->capture_default_str();
  s->add_option("--sizes", sizes_text, "comma separated sizes")->required();
  s->add_option("--tail", sweep.tail_fraction, "fraction of columns dropped for the tail norm")
      ->capture_default_str();
  s->add_option("--out", sweep.out, "CSV path (stdout if omitted)");

  CnumOptions cnum;
  std::string c_text;
  double s0 = 0.0;
  auto* c = app.add_subcommand("cnum", "c-numerical range and sandwich check");
  c->add_option("input", cnum.input, "matrix JSON file")->required();
  c->add_option("--c", c_text, "real coefficients, comma separated")->required();
  c->add_option("--angles", cnum.angles)->capture_default_str();
  c->add_option("--oracle", cnum.oracle, "random frames (0 disables)")->capture_default_str();
  c->add_option("--seed", cnum.seed)->capture_default_str();
  auto* s0_opt = c->add_option("--s0", s0, "essential norm of A - mu I for the inner disc");
  c->add_option("--report", cnum.report);
  c->add_option("--boundary", cnum.boundary);
  c->add_flag("--no-timestamp", no_timestamp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  const Provenance prov{command_line(argc, argv), 0, !no_timestamp};
  try {
    if (*a) {
      analyze.provenance = prov;
      analyze.provenance.seed = analyze.seed;
      return cmd_analyze(analyze, std::cout, std::cerr);
    }
    if (*g) return cmd_gen(gen, std::cout, std::cerr);
    if (*s) {
      for (const auto& v : split_list(sizes_text)) sweep.sizes.push_back(std::stoul(v));
      return cmd_sweep(sweep, std::cout, std::cerr);
    }
    if (*c) {
      for (const auto& v : split_list(c_text)) cnum.c.push_back(std::stod(v));
      if (s0_opt->count() > 0) cnum.s0 = s0;
      cnum.provenance = prov;
      cnum.provenance.seed = cnum.seed;
      return cmd_cnum(cnum, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
