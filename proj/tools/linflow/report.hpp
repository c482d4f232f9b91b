// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "linflow/equivalence.hpp"
#include "linflow/floweval.hpp"

#include "matrix_io.hpp"

namespace linflow::cli {

// Key order follows construction order so reports read top to bottom.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "linflow";
inline constexpr const char* kToolVersion = "1.0.0";

// Fixed-width decimal rendering for the text reports; the JSON rendering
// keeps full round-trip precision.
std::string fmt(double v);

// One line identifying the tool, the tolerance profile, and the seed; every
// report embeds it so verdicts are reproducible.
std::string fingerprint(const ToleranceProfile& tol, std::uint64_t seed);

Json tolerances_json(const ToleranceProfile& tol);
Json verdict_json(const EquivalenceVerdict& v);
Json spectrum_json(const GeneratorMatrix& g, const ToleranceProfile& tol);
Json input_json(const ParsedMatrix& m);
Json canonical_json(const CanonicalClass& c);
Json period_json(const PeriodResult& p);

std::string render_classify_text(const Json& report);
std::string render_spectrum_text(const Json& report);
std::string render_period_text(const Json& report);
std::string render_canon_text(const Json& report);

}  // namespace linflow::cli
