// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "linflow/errors.hpp"

#include "commands.hpp"
#include "report.hpp"

namespace {

// Exit codes shared by every subcommand. Verdicts are not errors: classify
// exits 0 whatever the equivalence answer; only conjugate needs a code for
// "no conjugacy exists".
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kDimension = 3,
  kNumerical = 4,
  kNotEquivalent = 5,
};

void add_common(CLI::App* cmd, linflow::cli::CommonOptions* opt) {
  cmd->add_option("--tol", opt->tol_overrides,
                  "tolerance override key=value (repeatable); keys: "
                  "eig_cluster_tol, rank_tol, residual_tol, alpha_match_tol");
  cmd->add_option("--seed", opt->seed, "seed for every stochastic search");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace linflow::cli;

  CLI::App app{std::string("linflow ") + kToolVersion +
               " - classification of linear ODE flows up to topological, "
               "Hoelder, Lipschitz, and smooth equivalence"};
  app.require_subcommand(1);

  CommonOptions opt;

  std::string path_a, path_b, level = "all", json_out, out_path, window,
              project, x_text;
  bool verify = false;
  PortraitOptions popt;

  CLI::App* classify =
      app.add_subcommand("classify", "decide equivalence of two flows");
  classify->add_option("a", path_a, "generator document A")->required();
  classify->add_option("b", path_b, "generator document B")->required();
  classify
      ->add_option("--level", level, "equivalence level (default all)")
      ->check(CLI::IsMember(
          {"topological", "holder", "lipschitz", "smooth", "all"}));
  classify->add_option("--json", json_out,
                       "write the JSON report here instead of text to stdout");
  add_common(classify, &opt);

  CLI::App* canon =
      app.add_subcommand("canon", "canonical planar representative");
  canon->add_option("a", path_a, "generator document")->required();
  canon->add_option("--level", level, "catalog level")
      ->required()
      ->check(CLI::IsMember({"topological", "holder", "lipschitz", "smooth"}));
  canon->add_option("--json", json_out,
                    "write the JSON report here instead of text to stdout");
  add_common(canon, &opt);

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "eigenvalues, Lyapunov exponents, and "
                                     "the stable/central/unstable split");
  spectrum->add_option("a", path_a, "generator document")->required();
  spectrum->add_option("--json", json_out,
                       "write the JSON report here instead of text to stdout");
  add_common(spectrum, &opt);

  CLI::App* conjugate = app.add_subcommand(
      "conjugate", "construct the conjugating homeomorphism for an "
                   "equivalent pair");
  conjugate->add_option("a", path_a, "generator document A")->required();
  conjugate->add_option("b", path_b, "generator document B")->required();
  conjugate->add_option("--out", out_path, "map document output path")
      ->required();
  conjugate->add_flag("--verify", verify,
                      "append a residual grid summary and a Hoelder slope "
                      "estimate to the map document");
  add_common(conjugate, &opt);

  CLI::App* portrait =
      app.add_subcommand("portrait", "emit a planar phase portrait");
  portrait->add_option("a", path_a, "generator document")->required();
  portrait->add_option("--out", out_path, "output path (.svg or .csv)")
      ->required();
  portrait->add_option("--window", popt.window,
                       "view window x0,x1,y0,y1 (default -2,2,-2,2)");
  portrait->add_option("--project", popt.project,
                       "one-based coordinate pair i,j to project onto");
  portrait->add_option("--orbits", popt.orbit_count,
                       "number of seeded initial conditions");
  portrait->add_option("--samples", popt.sample_count,
                       "points per orbit polyline");
  portrait->add_option("--tmax", popt.t_span, "trace orbits over [-tmax, tmax]");
  add_common(portrait, &opt);

  CLI::App* period =
      app.add_subcommand("period", "minimal period of the orbit through x");
  period->add_option("a", path_a, "generator document")->required();
  period->add_option("--x", x_text, "initial point, comma-separated")
      ->required();
  period->add_option("--json", json_out,
                     "write the JSON report here instead of text to stdout");
  add_common(period, &opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (app.got_subcommand(classify)) {
      return run_classify(path_a, path_b, level, json_out, opt);
    }
    if (app.got_subcommand(canon)) {
      return run_canon(path_a, level, json_out, opt);
    }
    if (app.got_subcommand(spectrum)) {
      return run_spectrum(path_a, json_out, opt);
    }
    if (app.got_subcommand(conjugate)) {
      return run_conjugate(path_a, path_b, out_path, verify, opt);
    }
    if (app.got_subcommand(portrait)) {
      return run_portrait(path_a, out_path, popt, opt);
    }
    if (app.got_subcommand(period)) {
      return run_period(path_a, x_text, json_out, opt);
    }
    std::cerr << "linflow: no subcommand\n";
    return kInternal;
  } catch (const linflow::ParseError& e) {
    std::cerr << "linflow: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const linflow::DimensionMismatch& e) {
    std::cerr << "linflow: dimension mismatch: " << e.what() << "\n";
    return kDimension;
  } catch (const linflow::UnsupportedDimension& e) {
    std::cerr << "linflow: unsupported dimension: " << e.what() << "\n";
    return kDimension;
  } catch (const linflow::NumericalFailure& e) {
    std::cerr << "linflow: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const linflow::DomainError& e) {
    std::cerr << "linflow: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::range_error& e) {
    std::cerr << "linflow: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "linflow: " << e.what() << "\n";
    return kInternal;
  }
}
