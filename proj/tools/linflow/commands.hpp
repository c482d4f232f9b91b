// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linflow/numcore.hpp"

namespace linflow::cli {

struct CommonOptions {
  std::vector<std::string> tol_overrides;
  std::uint64_t seed = kDefaultSeed;
};

// Each command returns the process exit code; input and numerical problems
// surface as the library's exceptions and are mapped to codes by main.

int run_classify(const std::string& path_a, const std::string& path_b,
                 const std::string& level, const std::string& json_out,
                 const CommonOptions& opt);

int run_canon(const std::string& path_a, const std::string& level,
              const std::string& json_out, const CommonOptions& opt);

int run_spectrum(const std::string& path_a, const std::string& json_out,
                 const CommonOptions& opt);

int run_conjugate(const std::string& path_a, const std::string& path_b,
                  const std::string& out_path, bool verify,
                  const CommonOptions& opt);

struct PortraitOptions {
  std::string window;   // "x0,x1,y0,y1", empty for the default square
  std::string project;  // "i,j" one-based coordinates, empty for none
  std::size_t orbit_count = 12;
  std::size_t sample_count = 400;
  double t_span = 8.0;
};

int run_portrait(const std::string& path_a, const std::string& out_path,
                 const PortraitOptions& popt, const CommonOptions& opt);

int run_period(const std::string& path_a, const std::string& x_text,
               const std::string& json_out, const CommonOptions& opt);

}  // namespace linflow::cli
