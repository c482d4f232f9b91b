// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linflow/flowstruct.hpp"

namespace linflow {

// Evaluator for t -> e^{tA} built once per generator. Uses the closed
// Jordan-block forms when a usable chain basis exists and falls back to the
// series oracle otherwise. Throws std::range_error when e^{tA} overflows.
class FlowOperator {
 public:
  explicit FlowOperator(GeneratorMatrix a, const ToleranceProfile& tol = {});

  GeneratorMatrix at(double t) const;
  Vec apply(double t, const Vec& x) const;

  bool closed_form() const { return jordan_.has_value(); }
  const GeneratorMatrix& generator() const { return a_; }

 private:
  GeneratorMatrix a_;
  ToleranceProfile tol_;
  std::optional<RealJordanDecomposition> jordan_;
};

// e^{tA} x through a one-shot FlowOperator.
Vec flow_map(const GeneratorMatrix& a, double t, const Vec& x,
             const ToleranceProfile& tol = {});

// Scaling-and-squaring evaluation of e^{tA} from the truncated series,
// independent of any spectral computation.
GeneratorMatrix exp_oracle(const GeneratorMatrix& a, double t);

// Orthonormal basis of the fixed-point set, i.e. ker A.
std::vector<Vec> fixed_space(const GeneratorMatrix& a,
                             const ToleranceProfile& tol = {});

// Orthonormal basis of the set of T-periodic points: ker A plus every
// rotation eigenplane whose rate b satisfies bT in 2 pi Z.
std::vector<Vec> periodic_subspace(const GeneratorMatrix& a, double T,
                                   const ToleranceProfile& tol = {});

struct PeriodResult {
  enum class Kind { Zero, Finite, Infinite };
  struct Ratio {
    long long p = 1;
    long long q = 1;
  };

  Kind kind = Kind::Infinite;
  double value = 0.0;  // the minimal period when finite
  Vec frequencies;     // rotation rates the point actually excites
  // frequencies[i] / frequencies[0] = p/q, the commensurability witness
  std::vector<Ratio> commensurability;
};

// Minimal period of the orbit through x: Zero for fixed points, Finite with
// the least T > 0 when the excited rotation rates are commensurable, and
// Infinite otherwise.
PeriodResult minimal_period(const GeneratorMatrix& a, const Vec& x,
                            const ToleranceProfile& tol = {});

// Central eigenvalues with multiplicity, sorted by imaginary part.
std::vector<Cplx> imaginary_spectrum(const GeneratorMatrix& a,
                                     const ToleranceProfile& tol = {});

struct OrbitSample {
  Vec times;
  std::vector<Vec> states;

  std::string to_csv() const;  // header "t,x1,...,xd"
};

OrbitSample sample_orbit(const GeneratorMatrix& a, const Vec& x0,
                         const Vec& times, const ToleranceProfile& tol = {});

}  // namespace linflow
