// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "report.hpp"

#include <cstdio>

#include "linflow/flowstruct.hpp"

namespace linflow::cli {

namespace {

// Shortest round-trip rendering, shared with the JSON output.
std::string exact(double v) { return Json(v).dump(); }

std::string cplx_text(double re, double im) {
  if (im == 0.0) return fmt(re);
  const std::string ipart = fmt(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0.0 ? "-" : "") + ipart;
  return fmt(re) + (im < 0.0 ? " - " : " + ") + ipart;
}

std::string join_numbers(const Json& arr) {
  std::string out;
  for (const auto& v : arr) {
    if (!out.empty()) out += ", ";
    out += fmt(v.get<double>());
  }
  return out.empty() ? "none" : out;
}

std::string join_eigenvalues(const Json& arr) {
  std::string out;
  for (const auto& v : arr) {
    if (!out.empty()) out += ", ";
    out += cplx_text(v[0].get<double>(), v[1].get<double>());
  }
  return out.empty() ? "none" : out;
}

std::string input_line(const Json& in) {
  std::string line = in["name"].get<std::string>() + " (" +
                     in["path"].get<std::string>() + "; " +
                     in["field"].get<std::string>() + "; dim " +
                     std::to_string(in["dim"].get<std::size_t>());
  if (in.contains("complex_dim")) {
    line += ", complex dim " +
            std::to_string(in["complex_dim"].get<std::size_t>());
  }
  return line + ")";
}

std::string spectrum_lines(const std::string& tag, const Json& sp) {
  std::string out;
  out += "  " + tag + " eigenvalues: " + join_eigenvalues(sp["eigenvalues"]) +
         "\n";
  out += "  " + tag + " lyapunov: " + join_numbers(sp["lyapunov"]) +
         "   split s/c/u: " + std::to_string(sp["stable_dim"].get<std::size_t>()) +
         "/" + std::to_string(sp["central_dim"].get<std::size_t>()) + "/" +
         std::to_string(sp["unstable_dim"].get<std::size_t>()) + "\n";
  if (!sp["central_frequencies"].empty()) {
    out += "  " + tag +
           " rotation rates: " + join_numbers(sp["central_frequencies"]) + "\n";
  }
  return out;
}

std::string verdict_line(const Json& v) {
  if (v.contains("skipped")) {
    return "skipped (" + v["skipped"].get<std::string>() + ")";
  }
  std::string out;
  if (v["equivalent"].get<bool>()) {
    out = "equivalent";
    if (!v["alpha"].is_null()) out += ", alpha " + fmt(v["alpha"].get<double>());
    if (v["time_reversed"].get<bool>()) out += ", time reversed";
  } else {
    out = "not equivalent";
  }
  if (!v["reasons"].empty()) {
    std::string rs;
    for (const auto& r : v["reasons"]) {
      if (!rs.empty()) rs += ", ";
      rs += r.get<std::string>();
    }
    out += "  [" + rs + "]";
  }
  return out;
}

std::string canonical_line(const Json& c) {
  std::string out = "\"" + c["label"].get<std::string>() + "\"";
  if (!c["parameters"].empty()) out += " (" + join_numbers(c["parameters"]) + ")";
  if (c["alpha"].get<double>() != 1.0) {
    out += ", alpha " + fmt(c["alpha"].get<double>());
  }
  return out;
}

}  // namespace

std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fingerprint(const ToleranceProfile& tol, std::uint64_t seed) {
  return std::string(kToolName) + " " + kToolVersion +
         "; eig_cluster_tol=" + exact(tol.eig_cluster_tol) +
         "; rank_tol=" + exact(tol.rank_tol) +
         "; residual_tol=" + exact(tol.residual_tol) +
         "; alpha_match_tol=" + exact(tol.alpha_match_tol) +
         "; seed=" + std::to_string(seed);
}

Json tolerances_json(const ToleranceProfile& tol) {
  Json j;
  j["eig_cluster_tol"] = tol.eig_cluster_tol;
  j["rank_tol"] = tol.rank_tol;
  j["residual_tol"] = tol.residual_tol;
  j["alpha_match_tol"] = tol.alpha_match_tol;
  return j;
}

Json verdict_json(const EquivalenceVerdict& v) {
  Json j;
  j["level"] = to_string(v.level.tag);
  if (v.level.beta) j["beta"] = *v.level.beta;
  j["equivalent"] = v.equivalent;
  j["alpha"] = v.alpha ? Json(*v.alpha) : Json(nullptr);
  j["time_reversed"] = v.time_reversed;
  Json reasons = Json::array();
  for (const Reason r : v.reasons) reasons.push_back(to_string(r));
  j["reasons"] = std::move(reasons);
  Json implied = Json::array();
  for (const EquivalenceLevel& lvl : v.implied) {
    Json e;
    e["level"] = to_string(lvl.tag);
    if (lvl.beta) e["beta"] = *lvl.beta;
    implied.push_back(std::move(e));
  }
  j["implied"] = std::move(implied);
  return j;
}

Json spectrum_json(const GeneratorMatrix& g, const ToleranceProfile& tol) {
  const Spectrum sp = eigenvalues(g, tol);
  const FlowDecomposition fd = scu_split(g, tol);
  Json j;
  Json eigs = Json::array();
  for (const Cplx z : sp.values()) {
    eigs.push_back(Json::array({z.real(), z.imag()}));
  }
  j["eigenvalues"] = std::move(eigs);
  j["lyapunov"] = fd.lambda;
  j["stable_dim"] = fd.d_s;
  j["central_dim"] = fd.d_c;
  j["unstable_dim"] = fd.d_u;
  j["central_frequencies"] = fd.central_frequencies;
  return j;
}

Json input_json(const ParsedMatrix& m) {
  Json j;
  j["path"] = m.path;
  j["name"] = m.name;
  j["field"] = m.field;
  j["dim"] = m.gen.dim();
  if (m.is_complex()) j["complex_dim"] = m.complex_dim();
  return j;
}

Json canonical_json(const CanonicalClass& c) {
  Json j;
  j["level"] = to_string(c.level);
  j["label"] = c.label;
  j["parameters"] = c.parameters;
  j["alpha"] = c.alpha;
  const GeneratorMatrix& rep = c.representative;
  Json entries = Json::array();
  if (rep.origin() == GeneratorMatrix::Origin::RealifiedComplex) {
    const ComplexMatrix m = derealify(rep);
    for (std::size_t i = 0; i < m.dim; ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < m.dim; ++k) {
        row.push_back(Json::array({m.at(i, k).real(), m.at(i, k).imag()}));
      }
      entries.push_back(std::move(row));
    }
    j["representative"] = {{"field", "complex"}, {"entries", std::move(entries)}};
  } else {
    for (std::size_t i = 0; i < rep.dim(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < rep.dim(); ++k) row.push_back(rep(i, k));
      entries.push_back(std::move(row));
    }
    j["representative"] = {{"field", "real"}, {"entries", std::move(entries)}};
  }
  return j;
}

Json period_json(const PeriodResult& p) {
  Json j;
  switch (p.kind) {
    case PeriodResult::Kind::Zero:
      j["kind"] = "zero";
      j["period"] = 0.0;
      break;
    case PeriodResult::Kind::Finite:
      j["kind"] = "finite";
      j["period"] = p.value;
      break;
    case PeriodResult::Kind::Infinite:
      j["kind"] = "infinite";
      j["period"] = nullptr;
      break;
  }
  j["frequencies"] = p.frequencies;
  Json ratios = Json::array();
  for (const auto& r : p.commensurability) {
    ratios.push_back(Json::array({r.p, r.q}));
  }
  j["commensurability"] = std::move(ratios);
  return j;
}

std::string render_classify_text(const Json& report) {
  std::string out = "linflow classify\n";
  out += "  A: " + input_line(report["inputs"]["a"]) + "\n";
  out += "  B: " + input_line(report["inputs"]["b"]) + "\n";
  out += "  " + report["fingerprint"].get<std::string>() + "\n\n";
  out += spectrum_lines("A", report["spectra"]["a"]);
  out += spectrum_lines("B", report["spectra"]["b"]);
  if (!report["cross_ratio"].is_null()) {
    const Json& cr = report["cross_ratio"];
    out += "  cross ratio: rho_plus " + fmt(cr["rho_plus"].get<double>()) +
           ", rho " + fmt(cr["rho"].get<double>()) + ", beta_star " +
           fmt(cr["beta_star"].get<double>()) + "\n";
  }
  out += "\n";
  for (const auto& [name, verdict] : report["levels"].items()) {
    out += "  " + name + ": " + verdict_line(verdict) + "\n";
  }
  if (!report["canonical"].is_null()) {
    out += "\n";
    for (const auto& [tag, per_level] : report["canonical"].items()) {
      if (per_level.is_null()) continue;
      const std::string label = tag == "a" ? "A" : "B";
      for (const auto& [name, c] : per_level.items()) {
        out += "  canonical " + label + " (" + name +
               "): " + canonical_line(c) + "\n";
      }
    }
  }
  return out;
}

std::string render_spectrum_text(const Json& report) {
  std::string out = "linflow spectrum\n";
  out += "  A: " + input_line(report["input"]) + "\n";
  out += "  " + report["fingerprint"].get<std::string>() + "\n\n";
  out += spectrum_lines("A", report["spectrum"]);
  return out;
}

std::string render_period_text(const Json& report) {
  std::string out = "linflow period\n";
  out += "  A: " + input_line(report["input"]) + "\n";
  out += "  x: (" + join_numbers(report["x"]) + ")\n";
  out += "  " + report["fingerprint"].get<std::string>() + "\n\n";
  const Json& p = report["period"];
  const std::string kind = p["kind"].get<std::string>();
  if (kind == "zero") {
    out += "  period: 0 (fixed point)\n";
  } else if (kind == "finite") {
    out += "  period: " + fmt(p["period"].get<double>()) + "\n";
  } else {
    out += "  period: infinite (excited rotation rates are incommensurable)\n";
  }
  if (!p["frequencies"].empty()) {
    out += "  excited rates: " + join_numbers(p["frequencies"]) + "\n";
  }
  const Json& ratios = p["commensurability"];
  if (!ratios.empty()) {
    std::string rs;
    for (const auto& r : ratios) {
      if (!rs.empty()) rs += ", ";
      rs += std::to_string(r[0].get<long long>()) + "/" +
            std::to_string(r[1].get<long long>());
    }
    out += "  rate ratios: " + rs + "\n";
  }
  return out;
}

std::string render_canon_text(const Json& report) {
  std::string out = "linflow canon\n";
  out += "  A: " + input_line(report["input"]) + "\n";
  out += "  " + report["fingerprint"].get<std::string>() + "\n\n";
  const Json& c = report["canonical"];
  out += "  level: " + c["level"].get<std::string>() + "\n";
  out += "  class: " + canonical_line(c) + "\n";
  out += "  representative (" +
         c["representative"]["field"].get<std::string>() + "):\n";
  for (const auto& row : c["representative"]["entries"]) {
    std::string line;
    for (const auto& e : row) {
      if (!line.empty()) line += ", ";
      if (e.is_array()) {
        line += cplx_text(e[0].get<double>(), e[1].get<double>());
      } else {
        line += fmt(e.get<double>());
      }
    }
    out += "    [" + line + "]\n";
  }
  return out;
}

}  // namespace linflow::cli
