// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linflow/numcore.hpp"

namespace linflow::cli {

// A matrix document loaded from disk. Complex documents are realified for
// the deciders; `complex_source` keeps the parsed operator for the complex
// classification path.
struct ParsedMatrix {
  GeneratorMatrix gen;
  std::optional<ComplexMatrix> complex_source;
  std::string field;  // "real" or "complex"
  std::string name;   // document name, or the file name when absent
  std::string path;

  bool is_complex() const { return complex_source.has_value(); }
  std::size_t complex_dim() const {
    return complex_source ? complex_source->dim : 0;
  }
};

// Parses {"field": "real"|"complex", "entries": [[...]], "name"?: "..."}.
// Real entries are numbers; complex entries are numbers or [re, im] pairs.
// Throws ParseError naming the file on any schema or value problem.
ParsedMatrix parse_matrix_file(const std::string& path);

// Defaults, then the JSON file named by LINFLOW_TOL_PROFILE, then the
// --tol key=value overrides, in that order. Keys are the ToleranceProfile
// field names; unknown keys and non-positive values are ParseErrors.
ToleranceProfile load_tolerances(const std::vector<std::string>& overrides);

// Reads a whole file; ParseError naming the path when unreadable.
std::string read_file(const std::string& path);

// Writes a whole file; ParseError naming the path on failure.
void write_file(const std::string& path, const std::string& data);

// Comma-separated finite doubles; ParseError mentioning `what` on failure.
std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what);

}  // namespace linflow::cli
