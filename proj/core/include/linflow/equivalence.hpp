// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linflow/flowstruct.hpp"

namespace linflow {

// Regularity levels for flow equivalence, coarsest first. BetaMinus(beta) is
// "Hoelder with every exponent below beta", BetaPlus(beta) includes the
// exponent beta itself.
enum class Level {
  Topological,
  SomeHolder,
  BetaMinus,
  BetaPlus,
  AllHolder,
  Lipschitz,
  Smooth,
};
std::string to_string(Level level);

struct EquivalenceLevel {
  Level tag = Level::Topological;
  std::optional<double> beta;
};

enum class Reason {
  DimsMismatch,
  CentralNotSimilar,
  LyapunovMismatch,
  NotSimilar,
  ComplexStructureObstruction,
  Boundary,
  SufficientConditionHolds,
  ConverseUnknown,
};
std::string to_string(Reason reason);

struct EquivalenceVerdict {
  EquivalenceLevel level;
  bool equivalent = false;
  // Signed time rescaling: h(e^{tA}x) = e^{alpha t B} h(x). Negative alpha
  // means the orbits are traversed in opposite directions.
  std::optional<double> alpha;
  bool time_reversed = false;
  std::vector<Reason> reasons;
  // Levels whose verdict follows from this one by the hierarchy, with the
  // same boolean.
  std::vector<EquivalenceLevel> implied;
};

struct CrossRatio {
  double rho_plus = 0.0;  // min ratio / |max ratio| over sorted exponents
  double rho = 0.0;       // max of rho_plus over both time orientations
};

// Finitely many time rescalings that could witness equivalence: ratios of
// sorted nonzero Lyapunov exponents (direct and reversed pairing), ratios of
// central rotation rates with both signs, and +-1 whenever a hyperbolic part
// exists. Sorted ascending, deduplicated.
std::vector<double> alpha_candidates(const FlowDecomposition& fa,
                                     const FlowDecomposition& fb,
                                     const ToleranceProfile& tol = {});

// Unordered stable/unstable dimension match plus central similarity
// A_C ~ alpha B_C. When the central part leaves alpha free the reported
// witness is the Hoelder-optimal rescaling of the hyperbolic part.
EquivalenceVerdict decide_topological(const GeneratorMatrix& a,
                                      const GeneratorMatrix& b,
                                      const ToleranceProfile& tol = {},
                                      std::uint64_t seed = kDefaultSeed);

// Hoelder equivalence with every exponent below one: Lyapunov spectra match
// under a common rescaling that also conjugates the central parts.
EquivalenceVerdict decide_holder(const GeneratorMatrix& a,
                                 const GeneratorMatrix& b,
                                 const ToleranceProfile& tol = {},
                                 std::uint64_t seed = kDefaultSeed);

// Linear-similarity equivalence A ~ alpha B. For realified complex inputs
// the witness must also commute with the complex structure.
EquivalenceVerdict decide_smooth(const GeneratorMatrix& a,
                                 const GeneratorMatrix& b,
                                 const ToleranceProfile& tol = {},
                                 std::uint64_t seed = kDefaultSeed);

// Lipschitz equivalence through the planar catalogs; defined for real inputs
// with d <= 2 and realified complex inputs with complex dimension <= 2.
EquivalenceVerdict decide_lipschitz2(const GeneratorMatrix& a,
                                     const GeneratorMatrix& b,
                                     const ToleranceProfile& tol = {},
                                     std::uint64_t seed = kDefaultSeed);

// Extremal ratio of sorted Lyapunov exponents for hyperbolic flows; rho > 0
// exactly when the stable/unstable dimensions match in some orientation.
// DomainError when either flow has a central part.
CrossRatio cross_ratio(const FlowDecomposition& fa, const FlowDecomposition& fb);

enum class BetaSide { Minus, Plus };

// Decides membership of the pair in the beta^- or beta^+ Hoelder class for
// hyperbolic flows by comparing beta^2 with the cross ratio. Exact when each
// flow is purely stable or purely unstable; otherwise the comparison is a
// sufficient criterion and a failed test reports ConverseUnknown. Results
// within alpha_match_tol of the threshold carry the Boundary reason.
EquivalenceVerdict decide_beta(const GeneratorMatrix& a,
                               const GeneratorMatrix& b, double beta,
                               BetaSide side, const ToleranceProfile& tol = {});

// Canonical representative of the flow's equivalence class at the given
// level. `alpha` is the signed rescaling with the representative's flow.
struct CanonicalClass {
  GeneratorMatrix representative;
  std::string label;
  std::vector<double> parameters;  // family parameters in label order
  double alpha = 1.0;
  Level level = Level::Topological;
};

// Planar catalogs: real inputs with d <= 2, realified complex inputs with
// complex dimension <= 2. UnsupportedDimension otherwise.
CanonicalClass canon2(const GeneratorMatrix& a, Level level,
                      const ToleranceProfile& tol = {});

// Equivalence of complex flows through their realifications: topological and
// Hoelder levels reduce to the real deciders, the smooth level additionally
// constrains the witness to be complex-linear, and the Lipschitz level runs
// the planar catalogs (complex dimension <= 2 only).
EquivalenceVerdict classify_complex(const ComplexMatrix& m,
                                    const ComplexMatrix& n, Level level,
                                    const ToleranceProfile& tol = {},
                                    std::uint64_t seed = kDefaultSeed);

}  // namespace linflow
