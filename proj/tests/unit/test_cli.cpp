// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "linflow/conjugacy.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;  // stdout and stderr, merged
};

// Spawns the installed binary through the shell; `env` is prepended verbatim
// so tests can set variables for a single invocation.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += std::string(LINFLOW_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  return r;
}

std::string data(const std::string& name) {
  return (fs::path(LINFLOW_TEST_DATA) / name).string();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("linflow_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string scratch(const std::string& name) {
  return (scratch_dir() / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("classify command") {
  TEST_CASE("text report for a saddle pair") {
    const RunResult r =
        run_cli("classify " + data("d_m1_1.json") + " " + data("d_m2_3.json"));
    CHECK(r.code == 0);
    CHECK(contains(r.out, "linflow classify"));
    CHECK(contains(r.out, "A: saddle"));
    CHECK(contains(r.out, "B: steep saddle"));
    CHECK(contains(r.out, "topological: equivalent, alpha 0.408248"));
    CHECK(contains(r.out, "holder: not equivalent  [lyapunov-mismatch]"));
    CHECK(contains(r.out, "smooth: not equivalent  [not-similar]"));
    CHECK(contains(r.out,
                   "cross ratio: rho_plus 0.666667, rho 0.666667, "
                   "beta_star 0.816497"));
    CHECK(contains(r.out, "canonical A (topological): \"diag(-1,1)\""));
  }

  TEST_CASE("json report is silent, parseable, and stable") {
    const std::string out = scratch("saddle_report.json");
    const std::string args = "classify " + data("d_m1_1.json") + " " +
                             data("d_m2_3.json") + " --json " + out;
    const RunResult r = run_cli(args);
    CHECK(r.code == 0);
    CHECK(r.out.empty());

    const std::string text = read_file(out);
    const Json doc = Json::parse(text);
    CHECK(doc["tool"]["name"] == "linflow");
    CHECK(doc["inputs"]["a"]["name"] == "saddle");
    CHECK(doc["inputs"]["b"]["dim"] == 2);
    CHECK(doc["levels"]["topological"]["equivalent"] == true);
    CHECK(doc["levels"]["topological"]["alpha"].get<double>() ==
          doctest::Approx(0.408248290463863).epsilon(1e-12));
    CHECK(doc["levels"]["holder"]["equivalent"] == false);
    CHECK(doc["levels"]["holder"]["alpha"].is_null());
    CHECK(doc["levels"]["smooth"]["reasons"][0] == "not-similar");
    CHECK(doc["cross_ratio"]["rho"].get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(doc["cross_ratio"]["beta_star"].get<double>() ==
          doctest::Approx(0.816496580927726).epsilon(1e-12));
    CHECK(doc["canonical"]["a"]["topological"]["label"] == "diag(-1,1)");
    CHECK(doc["canonical"]["b"]["holder"]["parameters"][0].get<double>() ==
          doctest::Approx(-2.0 / 3.0).epsilon(1e-12));

    // The emitted bytes are the canonical rendering of the document.
    CHECK(text == doc.dump(2) + "\n");

    // Identical inputs, seed, and tolerances give identical bytes.
    const std::string out2 = scratch("saddle_report_2.json");
    run_cli("classify " + data("d_m1_1.json") + " " + data("d_m2_3.json") +
            " --json " + out2);
    CHECK(read_file(out2) == text);
  }

  TEST_CASE("a flow is smoothly equivalent to itself") {
    const RunResult r = run_cli("classify " + data("j2_1.json") + " " +
                                data("j2_1.json") + " --level smooth");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "smooth: equivalent, alpha 1"));
  }

  TEST_CASE("conjugate complex rotations split at the smooth level") {
    const std::string out = scratch("complex_report.json");
    const RunResult r = run_cli("classify " + data("c_1pi.json") + " " +
                                data("c_1mi.json") + " --json " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["inputs"]["a"]["field"] == "complex");
    CHECK(doc["inputs"]["a"]["complex_dim"] == 1);
    CHECK(doc["inputs"]["a"]["dim"] == 2);
    CHECK(doc["levels"]["holder"]["equivalent"] == true);
    CHECK(doc["levels"]["smooth"]["equivalent"] == false);
    CHECK(doc["levels"]["smooth"]["reasons"][0] ==
          "complex-structure-obstruction");
    CHECK(doc["canonical"]["a"]["smooth"]["label"] == "c:1+ib");
    CHECK(doc["canonical"]["a"]["smooth"]["parameters"][0].get<double>() ==
          doctest::Approx(1.0));
    CHECK(doc["canonical"]["b"]["smooth"]["parameters"][0].get<double>() ==
          doctest::Approx(-1.0));
    CHECK(doc["canonical"]["a"]["smooth"]["representative"]["field"] ==
          "complex");
  }

  TEST_CASE("lipschitz is skipped beyond the planar catalogs") {
    const std::string out = scratch("d3_report.json");
    const RunResult r = run_cli("classify " + data("d3.json") + " " +
                                data("d3.json") + " --json " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["levels"]["smooth"]["equivalent"] == true);
    CHECK(doc["levels"]["lipschitz"].contains("skipped"));
    CHECK(doc["canonical"].is_null());
  }

  TEST_CASE("mixed field pairs compare as real flows") {
    const std::string out = scratch("mixed_report.json");
    const RunResult r = run_cli("classify " + data("c_1pi.json") + " " +
                                data("rot.json") + " --json " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    // Expanding spiral against a rotation: nothing matches.
    CHECK(doc["levels"]["topological"]["equivalent"] == false);
    // Both catalogs fall back to the real planar one.
    CHECK(doc["canonical"]["a"]["topological"]["label"] == "I2");
    CHECK(doc["canonical"]["b"]["topological"]["label"] == "J1(i)");
  }

  TEST_CASE("exit codes") {
    CHECK(run_cli("classify " + data("bad.json") + " " + data("i2.json")).code ==
          2);
    const RunResult dims =
        run_cli("classify " + data("d_m1_1.json") + " " + data("d3.json"));
    CHECK(dims.code == 3);
    CHECK(contains(dims.out, "dimension"));
    CHECK(run_cli("classify " + data("d_m1_1.json") + " no_such_file.json")
              .code == 2);
    CHECK(run_cli("classify " + data("d3.json") + " " + data("d3.json") +
                  " --level lipschitz")
              .code == 3);
    CHECK(run_cli("classify " + data("i2.json") + " " + data("i2.json") +
                  " --level bogus")
              .code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("").code == 2);
    const RunResult help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(contains(help.out, "classify"));
  }
}

TEST_SUITE("canon command") {
  TEST_CASE("defective block across levels") {
    const std::string out = scratch("canon_holder.json");
    CHECK(run_cli("canon " + data("j2_1.json") + " --level holder --json " +
                  out)
              .code == 0);
    const Json holder = Json::parse(read_file(out));
    CHECK(holder["canonical"]["label"] == "diag(a,1)");
    CHECK(holder["canonical"]["parameters"][0].get<double>() ==
          doctest::Approx(1.0));
    CHECK(holder["canonical"]["level"] == "all-holder");

    const std::string out2 = scratch("canon_smooth.json");
    CHECK(run_cli("canon " + data("j2_1.json") + " --level smooth --json " +
                  out2)
              .code == 0);
    const Json smooth = Json::parse(read_file(out2));
    CHECK(smooth["canonical"]["label"] == "J2(1)");
    CHECK(smooth["canonical"]["representative"]["entries"][0][1]
              .get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("text rendering names the class") {
    const RunResult r =
        run_cli("canon " + data("j2_1.json") + " --level topological");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "linflow canon"));
    CHECK(contains(r.out, "level: topological"));
    CHECK(contains(r.out, "class: \"I2\""));
    CHECK(contains(r.out, "representative (real):"));
  }

  TEST_CASE("complex representative renders complex entries") {
    const RunResult r =
        run_cli("canon " + data("c_1pi.json") + " --level smooth");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "class: \"c:1+ib\" (1)"));
    CHECK(contains(r.out, "representative (complex):"));
    CHECK(contains(r.out, "[1 + 1i]"));
  }

  TEST_CASE("level is required and the catalog is planar") {
    CHECK(run_cli("canon " + data("j2_1.json")).code == 2);
    CHECK(run_cli("canon " + data("d3.json") + " --level topological").code ==
          3);
  }
}

TEST_SUITE("spectrum command") {
  TEST_CASE("realified rotation rates with multiplicity") {
    const std::string out = scratch("spectrum.json");
    const RunResult r =
        run_cli("spectrum " + data("freq223.json") + " --json " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["input"]["complex_dim"] == 3);
    CHECK(doc["spectrum"]["eigenvalues"].size() == 6);
    CHECK(doc["spectrum"]["stable_dim"] == 0);
    CHECK(doc["spectrum"]["central_dim"] == 6);
    const Json& rates = doc["spectrum"]["central_frequencies"];
    REQUIRE(rates.size() == 3);
    CHECK(rates[0].get<double>() == doctest::Approx(2.0));
    CHECK(rates[1].get<double>() == doctest::Approx(2.0));
    CHECK(rates[2].get<double>() == doctest::Approx(3.0));
  }

  TEST_CASE("text rendering lists eigenvalues and the split") {
    const RunResult r = run_cli("spectrum " + data("d_m1_1.json"));
    CHECK(r.code == 0);
    CHECK(contains(r.out, "A eigenvalues: -1, 1"));
    CHECK(contains(r.out, "split s/c/u: 1/0/1"));
    const RunResult rc = run_cli("spectrum " + data("rot.json"));
    CHECK(contains(rc.out, "A eigenvalues: -1i, 1i"));
    CHECK(contains(rc.out, "A rotation rates: 1"));
  }
}

TEST_SUITE("conjugate command") {
  TEST_CASE("verified map for a holder equivalent pair") {
    const std::string out = scratch("map_b2d.json");
    const RunResult r = run_cli("conjugate " + data("j2_1.json") + " " +
                                data("i2.json") + " --out " + out +
                                " --verify");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "wrote " + out));

    const std::string text = read_file(out);
    const Json doc = Json::parse(text);
    CHECK(doc["kind"] == "block-to-diag");
    CHECK(doc["inverted"] == true);
    CHECK(doc["level"] == "all-holder");
    CHECK(doc["alpha"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["regularity"]["class"] == "all-holder");
    CHECK(doc["verification"]["residual"].get<double>() < 1e-9);
    const double est = doc["verification"]["holder_estimate"]["beta"]
                           .get<double>();
    CHECK(est > 0.8);
    CHECK(est < 1.05);

    // The document alone reconstructs the map.
    const linflow::ConjugacyMap h = linflow::ConjugacyMap::from_json(text);
    CHECK(h.kind() == linflow::ConjugacyMap::Kind::BlockToDiag);
    CHECK(h.is_inverted());
    linflow::GeneratorMatrix a(2), b(2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 1) = 1.0;
    b(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK(linflow::verify_relation(h, a, b, doc["alpha"].get<double>()) <
          1e-9);
  }

  TEST_CASE("topological pair gets the optimal exponent map") {
    const std::string out = scratch("map_power.json");
    const RunResult r = run_cli("conjugate " + data("d_m1_1.json") + " " +
                                data("d_m2_3.json") + " --out " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["level"] == "topological");
    CHECK(doc["alpha"].get<double>() ==
          doctest::Approx(0.408248290463863).epsilon(1e-12));
    CHECK(doc["regularity"]["class"] == "beta");
    CHECK(doc["regularity"]["gamma"].get<double>() ==
          doctest::Approx(0.816496580927726).epsilon(1e-9));
    CHECK(!doc.contains("verification"));
  }

  TEST_CASE("inequivalent flows refuse a map") {
    const std::string out = scratch("map_none.json");
    const RunResult r = run_cli("conjugate " + data("d_01.json") + " " +
                                data("i2.json") + " --out " + out);
    CHECK(r.code == 5);
    CHECK(contains(r.out, "not topologically equivalent"));
    CHECK(!fs::exists(out));
  }
}

TEST_SUITE("portrait command") {
  TEST_CASE("rotation orbits close into polylines") {
    const std::string out = scratch("rot.svg");
    const RunResult r =
        run_cli("portrait " + data("rot.json") + " --out " + out);
    CHECK(r.code == 0);
    const std::string svg = read_file(out);
    CHECK(svg.substr(0, 4) == "<svg");
    CHECK(contains(svg, "<polyline"));
    CHECK(contains(svg, "</svg>"));

    // Same seed, same bytes; a new seed moves the sampled orbits.
    const std::string out2 = scratch("rot2.svg");
    run_cli("portrait " + data("rot.json") + " --out " + out2);
    CHECK(read_file(out2) == svg);
    const std::string out3 = scratch("rot3.svg");
    run_cli("portrait " + data("rot.json") + " --seed 7 --out " + out3);
    CHECK(read_file(out3) != svg);
  }

  TEST_CASE("fixed points render as circles") {
    const std::string out = scratch("zero.svg");
    CHECK(run_cli("portrait " + data("zero2.json") + " --out " + out).code ==
          0);
    const std::string svg = read_file(out);
    CHECK(contains(svg, "<circle"));
    CHECK(!contains(svg, "<polyline"));
  }

  TEST_CASE("csv output carries the sampled orbits") {
    const std::string out = scratch("orbits.csv");
    CHECK(run_cli("portrait " + data("d_m1_1.json") + " --out " + out).code ==
          0);
    const std::string csv = read_file(out);
    CHECK(csv.substr(0, 9) == "# orbit 1");
    CHECK(contains(csv, "t,x1,x2"));
  }

  TEST_CASE("higher dimensions need an explicit projection") {
    const std::string out = scratch("d3.svg");
    CHECK(run_cli("portrait " + data("d3.json") + " --out " + out).code == 3);
    CHECK(run_cli("portrait " + data("d3.json") + " --project 1,3 --out " +
                  out)
              .code == 0);
    CHECK(run_cli("portrait " + data("d3.json") + " --project 1,1 --out " +
                  out)
              .code == 2);
    CHECK(run_cli("portrait " + data("d3.json") + " --project 0,2 --out " +
                  out)
              .code == 2);
  }

  TEST_CASE("window validation") {
    const std::string out = scratch("win.svg");
    CHECK(run_cli("portrait " + data("rot.json") + " --window 1,2,3 --out " +
                  out)
              .code == 2);
    CHECK(run_cli("portrait " + data("rot.json") +
                  " --window 2,1,-1,1 --out " + out)
              .code == 2);
    CHECK(run_cli("portrait " + data("rot.json") +
                  " --window -3,3,-3,3 --out " + out)
              .code == 0);
  }
}

TEST_SUITE("period command") {
  TEST_CASE("commensurable rates close up at the joint period") {
    const std::string out = scratch("period.json");
    const RunResult r = run_cli("period " + data("freq223.json") +
                                " --x 0.3,0.1,-0.2,0.4,0.5,-0.6 --json " +
                                out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["period"]["kind"] == "finite");
    CHECK(doc["period"]["period"].get<double>() ==
          doctest::Approx(6.283185307179586).epsilon(1e-12));
    CHECK(doc["period"]["frequencies"].size() == 2);
    CHECK(doc["period"]["commensurability"][0][0] == 1);
    CHECK(doc["period"]["commensurability"][0][1] == 1);
    CHECK(doc["period"]["commensurability"][1][0] == 3);
    CHECK(doc["period"]["commensurability"][1][1] == 2);

    const RunResult text = run_cli("period " + data("freq223.json") +
                                   " --x 0.3,0.1,-0.2,0.4,0.5,-0.6");
    CHECK(contains(text.out, "period: 6.28319"));
    CHECK(contains(text.out, "excited rates: 2, 3"));
    CHECK(contains(text.out, "rate ratios: 1/1, 3/2"));
  }

  TEST_CASE("hyperbolic motion never returns") {
    const RunResult r =
        run_cli("period " + data("j2_1.json") + " --x 1,0");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "period: infinite"));
  }

  TEST_CASE("fixed points have period zero") {
    const RunResult r =
        run_cli("period " + data("zero2.json") + " --x 0.5,0");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "period: 0 (fixed point)"));
  }

  TEST_CASE("coordinate count must match the realified dimension") {
    CHECK(run_cli("period " + data("d_m1_1.json") + " --x 1").code == 3);
    CHECK(run_cli("period " + data("freq223.json") + " --x 1,0,0").code == 3);
    CHECK(run_cli("period " + data("d_m1_1.json") + " --x 1,oops").code == 2);
  }
}

TEST_SUITE("tolerances and seeds") {
  TEST_CASE("overrides reach the fingerprint and the report") {
    const std::string out = scratch("tol_report.json");
    const RunResult r =
        run_cli("classify " + data("d_m1_1.json") + " " + data("d_m2_3.json") +
                " --tol eig_cluster_tol=1e-6 --json " + out);
    CHECK(r.code == 0);
    const Json doc = Json::parse(read_file(out));
    CHECK(doc["tolerances"]["eig_cluster_tol"].get<double>() ==
          doctest::Approx(1e-6));
    CHECK(contains(doc["fingerprint"].get<std::string>(),
                   "eig_cluster_tol=1e-06"));
  }

  TEST_CASE("invalid overrides are parse errors") {
    const std::string base =
        "classify " + data("i2.json") + " " + data("i2.json");
    CHECK(run_cli(base + " --tol bogus=1").code == 2);
    CHECK(run_cli(base + " --tol eig_cluster_tol=abc").code == 2);
    CHECK(run_cli(base + " --tol eig_cluster_tol=-1").code == 2);
    CHECK(run_cli(base + " --tol eig_cluster_tol").code == 2);
  }

  TEST_CASE("profile file loads from the environment") {
    const RunResult r = run_cli(
        "spectrum " + data("i2.json"),
        "LINFLOW_TOL_PROFILE=" + data("prof.json"));
    CHECK(r.code == 0);
    CHECK(contains(r.out, "eig_cluster_tol=1e-06"));

    // Explicit overrides still win over the profile.
    const RunResult r2 = run_cli(
        "spectrum " + data("i2.json") + " --tol eig_cluster_tol=1e-5",
        "LINFLOW_TOL_PROFILE=" + data("prof.json"));
    CHECK(contains(r2.out, "eig_cluster_tol=1e-05"));

    // Unknown keys in the profile are rejected.
    CHECK(run_cli("spectrum " + data("i2.json"),
                  "LINFLOW_TOL_PROFILE=" + data("prof2.json"))
              .code == 2);
  }

  TEST_CASE("seed is reported") {
    const RunResult r =
        run_cli("spectrum " + data("i2.json") + " --seed 42");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "seed=42"));
  }
}
