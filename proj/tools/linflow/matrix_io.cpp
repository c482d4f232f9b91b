// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "matrix_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "linflow/errors.hpp"
#include "linflow/flowstruct.hpp"

namespace linflow::cli {

namespace {

using nlohmann::json;

std::string file_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

double finite_number(const json& v, const std::string& path,
                     const std::string& where) {
  if (!v.is_number()) {
    throw ParseError(path + ": " + where + " is not a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ParseError(path + ": " + where + " is not finite");
  }
  return d;
}

Cplx complex_entry(const json& v, const std::string& path,
                   const std::string& where) {
  if (v.is_number()) return Cplx(finite_number(v, path, where), 0.0);
  if (v.is_array() && v.size() == 2) {
    return Cplx(finite_number(v[0], path, where + " real part"),
                finite_number(v[1], path, where + " imaginary part"));
  }
  throw ParseError(path + ": " + where + " is not a number or [re, im] pair");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw ParseError(path + ": read failed");
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f.good()) throw ParseError(path + ": cannot open file for writing");
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f.good()) throw ParseError(path + ": write failed");
}

ParsedMatrix parse_matrix_file(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(path + ": document is not an object");
  if (!doc.contains("field") || !doc["field"].is_string()) {
    throw ParseError(path + ": missing string key \"field\"");
  }
  const std::string field = doc["field"].get<std::string>();
  if (field != "real" && field != "complex") {
    throw ParseError(path + ": field must be \"real\" or \"complex\", got \"" +
                     field + "\"");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError(path + ": missing array key \"entries\"");
  }
  const json& rows = doc["entries"];
  const std::size_t d = rows.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (!rows[i].is_array() || rows[i].size() != d) {
      throw ParseError(path + ": entries row " + std::to_string(i) +
                       " does not have " + std::to_string(d) + " columns");
    }
  }

  ParsedMatrix out;
  out.field = field;
  out.path = path;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) {
      throw ParseError(path + ": \"name\" is not a string");
    }
    out.name = doc["name"].get<std::string>();
  } else {
    out.name = file_stem(path);
  }

  if (field == "real") {
    GeneratorMatrix g(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const std::string where = "entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")";
        g(i, j) = finite_number(rows[i][j], path, where);
      }
    }
    g.set_label(out.name);
    out.gen = std::move(g);
  } else {
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const std::string where = "entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")";
        m.at(i, j) = complex_entry(rows[i][j], path, where);
      }
    }
    out.gen = realify(m);
    out.gen.set_label(out.name);
    out.complex_source = std::move(m);
  }
  return out;
}

namespace {

void apply_tolerance_key(ToleranceProfile& tol, const std::string& key,
                         double value, const std::string& origin) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw ParseError(origin + ": tolerance " + key + " must be positive");
  }
  if (key == "eig_cluster_tol") {
    tol.eig_cluster_tol = value;
  } else if (key == "rank_tol") {
    tol.rank_tol = value;
  } else if (key == "residual_tol") {
    tol.residual_tol = value;
  } else if (key == "alpha_match_tol") {
    tol.alpha_match_tol = value;
  } else {
    throw ParseError(origin + ": unknown tolerance key \"" + key + "\"");
  }
}

}  // namespace

ToleranceProfile load_tolerances(const std::vector<std::string>& overrides) {
  ToleranceProfile tol;
  if (const char* profile_path = std::getenv("LINFLOW_TOL_PROFILE")) {
    const std::string text = read_file(profile_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(profile_path) + ": " + e.what());
    }
    if (!doc.is_object()) {
      throw ParseError(std::string(profile_path) +
                       ": tolerance profile is not an object");
    }
    for (const auto& [key, value] : doc.items()) {
      if (!value.is_number()) {
        throw ParseError(std::string(profile_path) + ": tolerance " + key +
                         " is not a number");
      }
      apply_tolerance_key(tol, key, value.get<double>(), profile_path);
    }
  }
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) {
      throw ParseError("--tol expects key=value, got \"" + kv + "\"");
    }
    const std::string key = kv.substr(0, eq);
    const std::string text = kv.substr(eq + 1);
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
      throw ParseError("--tol " + key + ": \"" + text + "\" is not a number");
    }
    apply_tolerance_key(tol, key, value, "--tol");
  }
  return tol;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string piece = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (end == piece.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw ParseError(what + ": \"" + piece + "\" is not a finite number");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace linflow::cli
