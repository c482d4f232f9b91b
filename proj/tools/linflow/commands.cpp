// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

#include "linflow/conjugacy.hpp"
#include "linflow/equivalence.hpp"
#include "linflow/errors.hpp"
#include "linflow/floweval.hpp"
#include "linflow/flowstruct.hpp"

#include "report.hpp"

namespace linflow::cli {

namespace {

Level level_of(const std::string& name) {
  if (name == "topological") return Level::Topological;
  if (name == "holder") return Level::AllHolder;
  if (name == "lipschitz") return Level::Lipschitz;
  if (name == "smooth") return Level::Smooth;
  throw ParseError("unknown level \"" + name + "\"");
}

// The complex tag constrains witnesses; it only makes sense when both flows
// carry it, so a mixed pair is compared through the plain real pictures.
void align_origins(ParsedMatrix& a, ParsedMatrix& b) {
  if (a.is_complex() != b.is_complex()) {
    a.gen.set_origin(GeneratorMatrix::Origin::RealInput);
    b.gen.set_origin(GeneratorMatrix::Origin::RealInput);
  }
}

// Mirrors the catalog caps after origin alignment: realified complex flows
// keep the complex catalogs up to complex dimension two.
bool planar_catalog_applies(const ParsedMatrix& m) {
  if (m.gen.origin() == GeneratorMatrix::Origin::RealifiedComplex) {
    return m.gen.dim() <= 4;
  }
  return m.gen.dim() <= 2;
}

EquivalenceVerdict decide_at(const std::string& name, const ParsedMatrix& a,
                             const ParsedMatrix& b, const ToleranceProfile& tol,
                             std::uint64_t seed) {
  const bool both_complex = a.is_complex() && b.is_complex();
  if (both_complex) {
    return classify_complex(*a.complex_source, *b.complex_source,
                            level_of(name), tol, seed);
  }
  if (name == "topological") return decide_topological(a.gen, b.gen, tol, seed);
  if (name == "holder") return decide_holder(a.gen, b.gen, tol, seed);
  if (name == "lipschitz") return decide_lipschitz2(a.gen, b.gen, tol, seed);
  return decide_smooth(a.gen, b.gen, tol, seed);
}

Json report_header(const ToleranceProfile& tol, std::uint64_t seed) {
  Json report;
  report["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  report["seed"] = seed;
  report["tolerances"] = tolerances_json(tol);
  report["fingerprint"] = fingerprint(tol, seed);
  return report;
}

void emit(const Json& report, const std::string& json_out,
          const std::string& text) {
  if (!json_out.empty()) {
    write_file(json_out, report.dump(2) + "\n");
  } else {
    std::cout << text;
  }
}

}  // namespace

int run_classify(const std::string& path_a, const std::string& path_b,
                 const std::string& level, const std::string& json_out,
                 const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  ParsedMatrix a = parse_matrix_file(path_a);
  ParsedMatrix b = parse_matrix_file(path_b);
  if (a.gen.dim() != b.gen.dim()) {
    throw DimensionMismatch(a.gen.display_name() + " (dim " +
                            std::to_string(a.gen.dim()) + ") and " +
                            b.gen.display_name() + " (dim " +
                            std::to_string(b.gen.dim()) +
                            ") cannot be classified against each other");
  }
  align_origins(a, b);

  Json report = report_header(tol, opt.seed);
  report["inputs"] = Json{{"a", input_json(a)}, {"b", input_json(b)}};
  report["spectra"] = Json{{"a", spectrum_json(a.gen, tol)},
                           {"b", spectrum_json(b.gen, tol)}};

  const FlowDecomposition fa = scu_split(a.gen, tol);
  const FlowDecomposition fb = scu_split(b.gen, tol);
  if (fa.hyperbolic() && fb.hyperbolic() && fa.dim() > 0) {
    const CrossRatio cr = cross_ratio(fa, fb);
    Json c;
    c["rho_plus"] = cr.rho_plus;
    c["rho"] = cr.rho;
    c["beta_star"] = cr.rho > 0.0 ? Json(std::sqrt(cr.rho)) : Json(nullptr);
    report["cross_ratio"] = std::move(c);
  } else {
    report["cross_ratio"] = nullptr;
  }

  std::vector<std::string> names;
  if (level == "all") {
    names = {"topological", "holder", "lipschitz", "smooth"};
  } else {
    names = {level};
  }

  Json levels;
  const bool planar = planar_catalog_applies(a) && planar_catalog_applies(b);
  for (const std::string& name : names) {
    if (name == "lipschitz" && level == "all" && !planar) {
      levels[name] =
          Json{{"skipped",
                "the planar catalogs cover real dimension <= 2 and complex "
                "dimension <= 2 only"}};
      continue;
    }
    levels[name] = verdict_json(decide_at(name, a, b, tol, opt.seed));
  }
  report["levels"] = std::move(levels);

  Json canonical;
  bool any_canon = false;
  for (const auto* m : {&a, &b}) {
    const std::string tag = m == &a ? "a" : "b";
    if (!planar_catalog_applies(*m)) {
      canonical[tag] = nullptr;
      continue;
    }
    Json per_level;
    for (const std::string& name : names) {
      per_level[name] = canonical_json(canon2(m->gen, level_of(name), tol));
    }
    canonical[tag] = std::move(per_level);
    any_canon = true;
  }
  report["canonical"] = any_canon ? std::move(canonical) : Json(nullptr);

  emit(report, json_out, render_classify_text(report));
  return 0;
}

int run_canon(const std::string& path_a, const std::string& level,
              const std::string& json_out, const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  const ParsedMatrix a = parse_matrix_file(path_a);
  const CanonicalClass c = canon2(a.gen, level_of(level), tol);

  Json report = report_header(tol, opt.seed);
  report["input"] = input_json(a);
  report["canonical"] = canonical_json(c);
  emit(report, json_out, render_canon_text(report));
  return 0;
}

int run_spectrum(const std::string& path_a, const std::string& json_out,
                 const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  const ParsedMatrix a = parse_matrix_file(path_a);

  Json report = report_header(tol, opt.seed);
  report["input"] = input_json(a);
  report["spectrum"] = spectrum_json(a.gen, tol);
  emit(report, json_out, render_spectrum_text(report));
  return 0;
}

int run_conjugate(const std::string& path_a, const std::string& path_b,
                  const std::string& out_path, bool verify,
                  const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  ParsedMatrix a = parse_matrix_file(path_a);
  ParsedMatrix b = parse_matrix_file(path_b);
  align_origins(a, b);

  // Finest level first so the emitted map is as regular as the pair allows.
  EquivalenceVerdict v = decide_smooth(a.gen, b.gen, tol, opt.seed);
  if (!v.equivalent) v = decide_holder(a.gen, b.gen, tol, opt.seed);
  if (!v.equivalent) v = decide_topological(a.gen, b.gen, tol, opt.seed);
  if (!v.equivalent) {
    std::string reasons;
    for (const Reason r : v.reasons) {
      if (!reasons.empty()) reasons += ", ";
      reasons += to_string(r);
    }
    if (reasons.empty()) reasons = "no witness";
    std::cerr << "linflow: " << a.gen.display_name() << " and "
              << b.gen.display_name()
              << " are not topologically equivalent: " << reasons << "\n";
    return 5;
  }

  const Pipeline pipeline = build_pipeline(a.gen, b.gen, v, tol, opt.seed);
  const HolderClass reg = pipeline.map.holder_class();

  Json doc = Json::parse(pipeline.map.to_json());
  doc["alpha"] = pipeline.alpha;
  doc["level"] = to_string(v.level.tag);
  const std::string reg_name = reg.tag == HolderClass::Tag::Lipschitz
                                   ? "lipschitz"
                                   : reg.tag == HolderClass::Tag::AllHolder
                                         ? "all-holder"
                                         : "beta";
  Json reg_json;
  reg_json["class"] = reg_name;
  if (reg.tag == HolderClass::Tag::Beta) reg_json["gamma"] = reg.gamma;
  doc["regularity"] = std::move(reg_json);

  std::string text = "linflow conjugate\n";
  text += "  A: " + a.name + " (" + a.path + ")\n";
  text += "  B: " + b.name + " (" + b.path + ")\n";
  text += "  " + fingerprint(tol, opt.seed) + "\n\n";
  text += "  level: " + to_string(v.level.tag) + "\n";
  text += "  alpha: " + fmt(pipeline.alpha) +
          (v.time_reversed ? " (time reversed)" : "") + "\n";
  text += "  map kind: " + to_string(pipeline.map.kind()) + "\n";
  text += "  regularity: " + reg_name +
          (reg.tag == HolderClass::Tag::Beta ? " (gamma " + fmt(reg.gamma) + ")"
                                             : "") +
          "\n";

  if (verify) {
    SamplingSpec spec;
    spec.seed = opt.seed;
    const double residual = verify_relation(pipeline.map, a.gen, b.gen,
                                            pipeline.alpha, spec, tol);
    const HolderEstimate est =
        estimate_holder_exponent(pipeline.map, spec.radius, spec);
    Json ver;
    ver["residual"] = residual;
    ver["t_range"] = Json::array({spec.t_min, spec.t_max});
    ver["t_points"] = spec.t_points;
    ver["x_count"] = spec.x_count;
    ver["radius"] = spec.radius;
    ver["holder_estimate"] =
        Json{{"beta", est.beta},
             {"forward", est.forward},
             {"inverse", est.inverse},
             {"std_error", est.std_error},
             {"constant", est.constant}};
    doc["verification"] = std::move(ver);
    text += "  residual: " + fmt(residual) + "\n";
    text += "  holder slopes: forward " + fmt(est.forward) + ", inverse " +
            fmt(est.inverse) + " (beta " + fmt(est.beta) + ")\n";
  }

  write_file(out_path, doc.dump(2) + "\n");
  text += "  wrote " + out_path + "\n";
  std::cout << text;
  return 0;
}

namespace {

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct OrbitPolyline {
  OrbitSample sample;  // time ordered full states
  bool fixed = false;
};

// Integrates outward from t = 0 in both directions, truncating a branch when
// the projected point leaves the padded window or the flow overflows.
OrbitPolyline trace_orbit(const FlowOperator& flow, const Vec& x0,
                          std::size_t px, std::size_t py, double t_span,
                          std::size_t samples, const double window[4]) {
  OrbitPolyline out;
  const double pad_x = 2.0 * (window[1] - window[0]);
  const double pad_y = 2.0 * (window[3] - window[2]);
  const auto visible = [&](const Vec& x) {
    return std::isfinite(x[px]) && std::isfinite(x[py]) &&
           x[px] >= window[0] - pad_x && x[px] <= window[1] + pad_x &&
           x[py] >= window[2] - pad_y && x[py] <= window[3] + pad_y;
  };

  const std::size_t half = samples / 2;
  const double dt = t_span / static_cast<double>(half);
  std::vector<std::pair<double, Vec>> backward, forward;
  for (int dir : {-1, 1}) {
    auto& side = dir < 0 ? backward : forward;
    for (std::size_t k = 1; k <= half; ++k) {
      const double t = dir * dt * static_cast<double>(k);
      Vec x;
      try {
        x = flow.apply(t, x0);
      } catch (const std::range_error&) {
        break;
      }
      if (!visible(x)) break;
      side.emplace_back(t, x);
    }
  }

  for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
    out.sample.times.push_back(it->first);
    out.sample.states.push_back(it->second);
  }
  out.sample.times.push_back(0.0);
  out.sample.states.push_back(x0);
  for (const auto& [t, x] : forward) {
    out.sample.times.push_back(t);
    out.sample.states.push_back(x);
  }

  double travel = 0.0;
  for (const auto& x : out.sample.states) {
    travel = std::max({travel, std::abs(x[px] - x0[px]),
                       std::abs(x[py] - x0[py])});
  }
  out.fixed = travel <= 1e-9 * (1.0 + std::abs(x0[px]) + std::abs(x0[py]));
  return out;
}

std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1b6ca8", "#c0392b", "#1e8449",
                                    "#8e44ad", "#d68910", "#17777a"};

std::string render_svg(const std::vector<OrbitPolyline>& orbits,
                       std::size_t px, std::size_t py,
                       const double window[4]) {
  const double size = 600.0;
  const auto sx = [&](double x) {
    return (x - window[0]) / (window[1] - window[0]) * size;
  };
  const auto sy = [&](double y) {
    return size - (y - window[2]) / (window[3] - window[2]) * size;
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
      "viewBox=\"0 0 600 600\">\n"
      "<rect width=\"600\" height=\"600\" fill=\"#ffffff\"/>\n";
  if (window[0] < 0.0 && window[1] > 0.0) {
    svg += "<line x1=\"" + svg_coord(sx(0.0)) + "\" y1=\"0\" x2=\"" +
           svg_coord(sx(0.0)) +
           "\" y2=\"600\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }
  if (window[2] < 0.0 && window[3] > 0.0) {
    svg += "<line x1=\"0\" y1=\"" + svg_coord(sy(0.0)) +
           "\" x2=\"600\" y2=\"" + svg_coord(sy(0.0)) +
           "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const OrbitSample& s = orbits[i].sample;
    if (orbits[i].fixed || s.states.size() < 2) {
      const Vec& x = s.states[s.states.size() / 2];
      svg += "<circle cx=\"" + svg_coord(sx(x[px])) + "\" cy=\"" +
             svg_coord(sy(x[py])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      continue;
    }
    std::string points;
    for (const Vec& x : s.states) {
      if (!points.empty()) points += " ";
      points += svg_coord(sx(x[px])) + "," + svg_coord(sy(x[py]));
    }
    svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
           std::string(color) + "\" stroke-width=\"1.5\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_orbit_csv(const std::vector<OrbitPolyline>& orbits) {
  std::string out;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (i > 0) out += "\n";
    out += "# orbit " + std::to_string(i + 1) +
           (orbits[i].fixed ? " (fixed point)" : "") + "\n";
    out += orbits[i].sample.to_csv();
  }
  return out;
}

}  // namespace

int run_portrait(const std::string& path_a, const std::string& out_path,
                 const PortraitOptions& popt, const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  const ParsedMatrix a = parse_matrix_file(path_a);
  const std::size_t d = a.gen.dim();

  std::size_t px = 0, py = 1;
  if (popt.project.empty()) {
    if (d != 2) {
      throw UnsupportedDimension(
          a.gen.display_name() + " has dimension " + std::to_string(d) +
          "; portraits need a planar flow or an explicit --project i,j");
    }
  } else {
    const std::vector<double> idx = parse_double_list(popt.project, "--project");
    if (idx.size() != 2) {
      throw ParseError("--project expects two one-based coordinates i,j");
    }
    const auto coord = [&](double v) -> std::size_t {
      if (v < 1.0 || v > static_cast<double>(d) || v != std::floor(v)) {
        throw ParseError("--project coordinates must be integers in [1, " +
                         std::to_string(d) + "]");
      }
      return static_cast<std::size_t>(v) - 1;
    };
    px = coord(idx[0]);
    py = coord(idx[1]);
    if (px == py) throw ParseError("--project coordinates must differ");
  }

  double window[4] = {-2.0, 2.0, -2.0, 2.0};
  if (!popt.window.empty()) {
    const std::vector<double> w = parse_double_list(popt.window, "--window");
    if (w.size() != 4 || w[0] >= w[1] || w[2] >= w[3]) {
      throw ParseError("--window expects x0,x1,y0,y1 with x0 < x1 and y0 < y1");
    }
    for (int i = 0; i < 4; ++i) window[i] = w[i];
  }

  const FlowOperator flow(a.gen, tol);
  std::mt19937_64 eng(opt.seed);
  std::vector<OrbitPolyline> orbits;
  orbits.reserve(popt.orbit_count);
  for (std::size_t i = 0; i < popt.orbit_count; ++i) {
    Vec x0(d, 0.0);
    x0[px] = window[0] + uniform01(eng) * (window[1] - window[0]);
    x0[py] = window[2] + uniform01(eng) * (window[3] - window[2]);
    orbits.push_back(trace_orbit(flow, x0, px, py, popt.t_span,
                                 popt.sample_count, window));
  }

  const bool csv = out_path.size() >= 4 &&
                   out_path.compare(out_path.size() - 4, 4, ".csv") == 0;
  write_file(out_path, csv ? render_orbit_csv(orbits)
                           : render_svg(orbits, px, py, window));

  std::size_t fixed = 0;
  for (const auto& o : orbits) fixed += o.fixed ? 1 : 0;
  std::string text = "linflow portrait\n";
  text += "  A: " + a.name + " (" + a.path + ")\n";
  text += "  " + fingerprint(tol, opt.seed) + "\n\n";
  text += "  orbits: " + std::to_string(orbits.size()) + " (" +
          std::to_string(fixed) + " fixed)\n";
  text += "  window: " + fmt(window[0]) + "," + fmt(window[1]) + "," +
          fmt(window[2]) + "," + fmt(window[3]) + "\n";
  text += "  wrote " + out_path + "\n";
  std::cout << text;
  return 0;
}

int run_period(const std::string& path_a, const std::string& x_text,
               const std::string& json_out, const CommonOptions& opt) {
  const ToleranceProfile tol = load_tolerances(opt.tol_overrides);
  const ParsedMatrix a = parse_matrix_file(path_a);
  const Vec x = parse_double_list(x_text, "--x");
  if (x.size() != a.gen.dim()) {
    throw DimensionMismatch("--x has " + std::to_string(x.size()) +
                            " coordinates but " + a.gen.display_name() +
                            " acts on dimension " +
                            std::to_string(a.gen.dim()));
  }

  Json report = report_header(tol, opt.seed);
  report["input"] = input_json(a);
  report["x"] = x;
  report["period"] = period_json(minimal_period(a.gen, x, tol));
  emit(report, json_out, render_period_text(report));
  return 0;
}

}  // namespace linflow::cli
