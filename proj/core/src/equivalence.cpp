// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "linflow/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace linflow {

std::string to_string(Level level) {
  switch (level) {
    case Level::Topological:
      return "topological";
    case Level::SomeHolder:
      return "some-holder";
    case Level::BetaMinus:
      return "beta-minus";
    case Level::BetaPlus:
      return "beta-plus";
    case Level::AllHolder:
      return "all-holder";
    case Level::Lipschitz:
      return "lipschitz";
    case Level::Smooth:
      return "smooth";
  }
  return "unknown";
}

std::string to_string(Reason reason) {
  switch (reason) {
    case Reason::DimsMismatch:
      return "dims-mismatch";
    case Reason::CentralNotSimilar:
      return "central-not-similar";
    case Reason::LyapunovMismatch:
      return "lyapunov-mismatch";
    case Reason::NotSimilar:
      return "not-similar";
    case Reason::ComplexStructureObstruction:
      return "complex-structure-obstruction";
    case Reason::Boundary:
      return "boundary";
    case Reason::SufficientConditionHolds:
      return "sufficient-condition-holds";
    case Reason::ConverseUnknown:
      return "converse-unknown";
  }
  return "unknown";
}

namespace {

constexpr Level kChain[] = {Level::Topological, Level::SomeHolder,
                            Level::AllHolder, Level::Lipschitz, Level::Smooth};

int chain_index(Level level) {
  switch (level) {
    case Level::Topological:
      return 0;
    case Level::SomeHolder:
      return 1;
    case Level::AllHolder:
      return 2;
    case Level::Lipschitz:
      return 3;
    case Level::Smooth:
      return 4;
    default:
      return -1;
  }
}

// A true verdict propagates to every coarser level, a false one to every
// finer level. The beta levels sit between some-Hoelder and all-Hoelder.
std::vector<EquivalenceLevel> implied_levels(const EquivalenceLevel& at,
                                             bool equivalent) {
  std::vector<EquivalenceLevel> out;
  if (at.tag == Level::BetaMinus || at.tag == Level::BetaPlus) {
    if (equivalent) {
      if (at.tag == Level::BetaPlus) out.push_back({Level::BetaMinus, at.beta});
      out.push_back({Level::SomeHolder, {}});
      out.push_back({Level::Topological, {}});
    } else {
      if (at.tag == Level::BetaMinus) out.push_back({Level::BetaPlus, at.beta});
      out.push_back({Level::AllHolder, {}});
      out.push_back({Level::Lipschitz, {}});
      out.push_back({Level::Smooth, {}});
    }
    return out;
  }
  const int idx = chain_index(at.tag);
  if (equivalent) {
    for (int i = idx - 1; i >= 0; --i) out.push_back({kChain[i], {}});
    // The topological condition decides the some-Hoelder level as well.
    if (at.tag == Level::Topological) out.push_back({Level::SomeHolder, {}});
  } else {
    for (int i = idx + 1; i < 5; ++i) out.push_back({kChain[i], {}});
  }
  return out;
}

void require_same_dim(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(a.display_name() + " and " + b.display_name() +
                            " have different dimensions");
  }
}

EquivalenceVerdict trivial_verdict(Level tag) {
  EquivalenceVerdict v;
  v.level = {tag, {}};
  v.equivalent = true;
  v.alpha = 1.0;
  v.implied = implied_levels(v.level, true);
  return v;
}

Vec nonzero_of(const Vec& lambda) {
  Vec out;
  for (double l : lambda) {
    if (l != 0.0) out.push_back(l);
  }
  return out;
}

// sorted(-lambda) for a lambda that is already sorted ascending.
Vec reversed_spectrum(const Vec& lambda) {
  Vec out(lambda.rbegin(), lambda.rend());
  for (double& v : out) v = -v;
  return out;
}

struct Orientation {
  bool direct_ok = false;
  bool reversed_ok = false;
};

Orientation dims_match(const FlowDecomposition& fa,
                       const FlowDecomposition& fb) {
  return {fa.d_s == fb.d_s && fa.d_u == fb.d_u,
          fa.d_s == fb.d_u && fa.d_u == fb.d_s};
}

// Positive candidates first so alpha = 1 wins over alpha = -1 on
// sign-symmetric spectra.
std::vector<double> ordered_candidates(const FlowDecomposition& fa,
                                       const FlowDecomposition& fb,
                                       const ToleranceProfile& tol) {
  const std::vector<double> cs = alpha_candidates(fa, fb, tol);
  std::vector<double> out;
  for (double c : cs) {
    if (c > 0.0) out.push_back(c);
  }
  for (double c : cs) {
    if (c < 0.0) out.push_back(c);
  }
  return out;
}

bool similar_up_to_witness(const GeneratorMatrix& a, const GeneratorMatrix& b,
                           const ToleranceProfile& tol, std::uint64_t seed) {
  try {
    return find_similarity(a, b, tol, seed).has_value();
  } catch (const WitnessNotInvertible&) {
    return true;
  }
}

// Similarity witness constrained to commute with the complex structure:
// Q A = B Q together with Q J = J Q, solved on the stacked operator.
bool complex_linear_similar(const GeneratorMatrix& a, const GeneratorMatrix& b,
                            const ToleranceProfile& tol, std::uint64_t seed) {
  const std::size_t d = a.dim();
  const Eigen::MatrixXd ea = detail::to_eigen(a);
  const Eigen::MatrixXd eb = detail::to_eigen(b);
  const Eigen::MatrixXd ej = detail::to_eigen(complex_structure(d));
  const Eigen::MatrixXd top = detail::intertwiner_operator(ea, eb);
  const Eigen::MatrixXd bottom = detail::intertwiner_operator(ej, ej);
  Eigen::MatrixXd stacked(top.rows() + bottom.rows(), top.cols());
  stacked << top, bottom;
  const Eigen::MatrixXd ker = detail::big_kernel(stacked, tol.rank_tol);
  if (ker.cols() == 0) return false;

  std::mt19937_64 eng = detail::seeded_engine(seed, 0x52u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 + ea.norm() + eb.norm();
  for (int draw = 0; draw < 32; ++draw) {
    Eigen::VectorXd w(ker.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = gauss(eng);
    Eigen::MatrixXd q = detail::unvec(ker * w, static_cast<Eigen::Index>(d));
    const double qn = q.norm();
    if (qn == 0.0) continue;
    q /= qn;
    if (std::abs(q.determinant()) <= tol.rank_tol) continue;
    if ((q * ea - eb * q).norm() <= tol.residual_tol * scale) return true;
  }
  return false;
}

}  // namespace

std::vector<double> alpha_candidates(const FlowDecomposition& fa,
                                     const FlowDecomposition& fb,
                                     const ToleranceProfile& tol) {
  if (fa.dim() != fb.dim()) {
    throw DimensionMismatch("flow decompositions of dimensions " +
                            std::to_string(fa.dim()) + " and " +
                            std::to_string(fb.dim()) + " cannot be matched");
  }
  std::vector<double> raw;
  const Vec la = nonzero_of(fa.lambda);
  const Vec lb = nonzero_of(fb.lambda);
  if (!la.empty() && la.size() == lb.size()) {
    const std::size_t n = la.size();
    for (std::size_t j = 0; j < n; ++j) {
      raw.push_back(la[j] / lb[j]);
      raw.push_back(la[j] / lb[n - 1 - j]);
    }
  }
  for (double wa : fa.central_frequencies) {
    for (double wb : fb.central_frequencies) {
      raw.push_back(wa / wb);
      raw.push_back(-wa / wb);
    }
  }
  if (!la.empty() && !lb.empty()) {
    raw.push_back(1.0);
    raw.push_back(-1.0);
  }
  std::vector<double> out;
  for (double r : raw) {
    if (std::isfinite(r) && r != 0.0) out.push_back(r);
  }
  if (out.empty()) return {1.0};
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double r : out) {
    if (dedup.empty() || std::abs(r - dedup.back()) >
                             tol.alpha_match_tol *
                                 std::max(1.0, std::abs(dedup.back()))) {
      dedup.push_back(r);
    }
  }
  return dedup;
}

EquivalenceVerdict decide_topological(const GeneratorMatrix& a,
                                      const GeneratorMatrix& b,
                                      const ToleranceProfile& tol,
                                      std::uint64_t seed) {
  require_same_dim(a, b);
  if (a.dim() == 0) return trivial_verdict(Level::Topological);
  EquivalenceVerdict v;
  v.level = {Level::Topological, {}};
  const FlowDecomposition fa = scu_split(a, tol);
  const FlowDecomposition fb = scu_split(b, tol);
  const Orientation orient = dims_match(fa, fb);
  if (!orient.direct_ok && !orient.reversed_ok) {
    v.equivalent = false;
    v.reasons = {Reason::DimsMismatch};
    v.implied = implied_levels(v.level, false);
    return v;
  }
  if (fa.d_c == 0) {
    // Trivial central part: equivalence is the dimension match, and the
    // geometric-mean rescaling optimizes the Hoelder exponent.
    v.equivalent = true;
    const bool direct = orient.direct_ok;
    v.time_reversed = !direct;
    const Vec la = nonzero_of(fa.lambda);
    const Vec lb = nonzero_of(fb.lambda);
    if (la.empty()) {
      v.alpha = direct ? 1.0 : -1.0;
    } else {
      const Vec lao = direct ? la : reversed_spectrum(la);
      double rmin = std::numeric_limits<double>::infinity();
      double rmax = -rmin;
      for (std::size_t j = 0; j < lao.size(); ++j) {
        const double r = lao[j] / lb[j];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
      }
      const double opt = std::sqrt(rmin * rmax);
      v.alpha = direct ? opt : -opt;
    }
    v.implied = implied_levels(v.level, true);
    return v;
  }
  for (double cand : ordered_candidates(fa, fb, tol)) {
    const bool direct = cand > 0.0;
    if (direct ? !orient.direct_ok : !orient.reversed_ok) continue;
    const GeneratorMatrix ace = direct ? fa.a_c : -fa.a_c;
    if (similar_up_to_witness(ace, std::abs(cand) * fb.a_c, tol, seed)) {
      v.equivalent = true;
      v.alpha = cand;
      v.time_reversed = !direct;
      v.implied = implied_levels(v.level, true);
      return v;
    }
  }
  v.equivalent = false;
  v.reasons = {Reason::CentralNotSimilar};
  v.implied = implied_levels(v.level, false);
  return v;
}

EquivalenceVerdict decide_holder(const GeneratorMatrix& a,
                                 const GeneratorMatrix& b,
                                 const ToleranceProfile& tol,
                                 std::uint64_t seed) {
  require_same_dim(a, b);
  if (a.dim() == 0) return trivial_verdict(Level::AllHolder);
  EquivalenceVerdict v;
  v.level = {Level::AllHolder, {}};
  const FlowDecomposition fa = scu_split(a, tol);
  const FlowDecomposition fb = scu_split(b, tol);
  bool lyapunov_matched = false;
  for (double cand : ordered_candidates(fa, fb, tol)) {
    Vec scaled = fb.lambda;
    for (double& l : scaled) l *= cand;
    std::sort(scaled.begin(), scaled.end());
    bool match = true;
    for (std::size_t j = 0; j < scaled.size(); ++j) {
      if (std::abs(fa.lambda[j] - scaled[j]) >
          tol.alpha_match_tol * std::max(1.0, std::abs(fa.lambda[j]))) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    lyapunov_matched = true;
    const GeneratorMatrix ace = cand > 0.0 ? fa.a_c : -fa.a_c;
    if (similar_up_to_witness(ace, std::abs(cand) * fb.a_c, tol, seed)) {
      v.equivalent = true;
      v.alpha = cand;
      v.time_reversed = cand < 0.0;
      v.implied = implied_levels(v.level, true);
      return v;
    }
  }
  v.equivalent = false;
  v.reasons = {lyapunov_matched ? Reason::CentralNotSimilar
                                : Reason::LyapunovMismatch};
  v.implied = implied_levels(v.level, false);
  return v;
}

EquivalenceVerdict decide_smooth(const GeneratorMatrix& a,
                                 const GeneratorMatrix& b,
                                 const ToleranceProfile& tol,
                                 std::uint64_t seed) {
  require_same_dim(a, b);
  if (a.dim() == 0) return trivial_verdict(Level::Smooth);
  EquivalenceVerdict v;
  v.level = {Level::Smooth, {}};
  const bool constrained =
      a.origin() == GeneratorMatrix::Origin::RealifiedComplex &&
      b.origin() == GeneratorMatrix::Origin::RealifiedComplex;
  const FlowDecomposition fa = scu_split(a, tol);
  const FlowDecomposition fb = scu_split(b, tol);
  const std::vector<double> cands = ordered_candidates(fa, fb, tol);
  for (double cand : cands) {
    const GeneratorMatrix aeff = cand > 0.0 ? a : time_reverse(a);
    const GeneratorMatrix bs = std::abs(cand) * b;
    const bool hit = constrained ? complex_linear_similar(aeff, bs, tol, seed)
                                 : similar_up_to_witness(aeff, bs, tol, seed);
    if (hit) {
      v.equivalent = true;
      v.alpha = cand;
      v.time_reversed = cand < 0.0;
      v.implied = implied_levels(v.level, true);
      return v;
    }
  }
  v.equivalent = false;
  if (constrained) {
    bool plain = false;
    for (double cand : cands) {
      const GeneratorMatrix aeff = cand > 0.0 ? a : time_reverse(a);
      if (similar_up_to_witness(aeff, std::abs(cand) * b, tol, seed)) {
        plain = true;
        break;
      }
    }
    v.reasons = {plain ? Reason::ComplexStructureObstruction
                       : Reason::NotSimilar};
  } else {
    v.reasons = {Reason::NotSimilar};
  }
  v.implied = implied_levels(v.level, false);
  return v;
}

CrossRatio cross_ratio(const FlowDecomposition& fa,
                       const FlowDecomposition& fb) {
  if (!fa.hyperbolic() || !fb.hyperbolic()) {
    throw DomainError("the cross ratio is defined for hyperbolic flows only");
  }
  if (fa.dim() != fb.dim()) {
    throw DimensionMismatch("cross ratio of flows with dimensions " +
                            std::to_string(fa.dim()) + " and " +
                            std::to_string(fb.dim()));
  }
  if (fa.lambda.empty()) return {1.0, 1.0};
  const auto rho_plus = [](const Vec& u, const Vec& w) {
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double r = u[j] / w[j];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    return rmin / std::abs(rmax);
  };
  const double direct = rho_plus(fa.lambda, fb.lambda);
  const double reversed = rho_plus(reversed_spectrum(fa.lambda), fb.lambda);
  return {direct, std::max(direct, reversed)};
}

EquivalenceVerdict decide_beta(const GeneratorMatrix& a,
                               const GeneratorMatrix& b, double beta,
                               BetaSide side, const ToleranceProfile& tol) {
  if (!std::isfinite(beta) || !(beta > 0.0) || !(beta < 1.0)) {
    throw DomainError("beta must lie in (0,1)");
  }
  require_same_dim(a, b);
  EquivalenceVerdict v;
  v.level = {side == BetaSide::Minus ? Level::BetaMinus : Level::BetaPlus,
             beta};
  const FlowDecomposition fa = scu_split(a, tol);
  const FlowDecomposition fb = scu_split(b, tol);
  if (!fa.hyperbolic()) {
    throw DomainError(a.display_name() +
                      " has a central part; the beta criteria need "
                      "hyperbolic flows");
  }
  if (!fb.hyperbolic()) {
    throw DomainError(b.display_name() +
                      " has a central part; the beta criteria need "
                      "hyperbolic flows");
  }
  const CrossRatio cr = cross_ratio(fa, fb);
  const bool exact = (fa.d_s == 0 || fa.d_u == 0) &&
                     (fb.d_s == 0 || fb.d_u == 0);
  const double b2 = beta * beta;
  const bool pass =
      side == BetaSide::Minus ? (b2 <= cr.rho) : (b2 < cr.rho);
  const bool boundary =
      std::abs(b2 - cr.rho) <= tol.alpha_match_tol * std::abs(cr.rho);
  v.equivalent = pass;
  v.time_reversed = cr.rho > cr.rho_plus;
  if (!exact) {
    v.reasons.push_back(pass ? Reason::SufficientConditionHolds
                             : Reason::ConverseUnknown);
  }
  if (boundary) v.reasons.push_back(Reason::Boundary);
  if (exact || pass) {
    v.implied = implied_levels(v.level, pass);
  }
  return v;
}

EquivalenceVerdict decide_lipschitz2(const GeneratorMatrix& a,
                                     const GeneratorMatrix& b,
                                     const ToleranceProfile& tol,
                                     std::uint64_t seed) {
  (void)seed;
  require_same_dim(a, b);
  if (a.dim() == 0) return trivial_verdict(Level::Lipschitz);
  EquivalenceVerdict v;
  v.level = {Level::Lipschitz, {}};
  GeneratorMatrix aa = a;
  GeneratorMatrix bb = b;
  if (aa.origin() != bb.origin()) {
    // Mixed origins compare as plain real planar flows.
    aa.set_origin(GeneratorMatrix::Origin::RealInput);
    bb.set_origin(GeneratorMatrix::Origin::RealInput);
  }
  const std::size_t cap =
      aa.origin() == GeneratorMatrix::Origin::RealifiedComplex ? 4 : 2;
  if (aa.dim() > cap) {
    throw UnsupportedDimension(
        "lipschitz equivalence beyond the plane depends on a similarity "
        "notion outside this library's scope; only d <= 2 is classified");
  }
  const CanonicalClass ca = canon2(aa, Level::Lipschitz, tol);
  const CanonicalClass cb = canon2(bb, Level::Lipschitz, tol);
  bool labels_equal = ca.label == cb.label;
  bool params_equal = labels_equal &&
                      ca.parameters.size() == cb.parameters.size();
  if (params_equal) {
    for (std::size_t j = 0; j < ca.parameters.size(); ++j) {
      if (std::abs(ca.parameters[j] - cb.parameters[j]) >
          tol.alpha_match_tol * std::max(1.0, std::abs(cb.parameters[j]))) {
        params_equal = false;
        break;
      }
    }
  }
  if (labels_equal && params_equal) {
    v.equivalent = true;
    v.alpha = ca.alpha / cb.alpha;
    v.time_reversed = *v.alpha < 0.0;
    v.implied = implied_levels(v.level, true);
    return v;
  }
  v.equivalent = false;
  v.reasons = {labels_equal ? Reason::LyapunovMismatch : Reason::NotSimilar};
  v.implied = implied_levels(v.level, false);
  return v;
}

EquivalenceVerdict classify_complex(const ComplexMatrix& m,
                                    const ComplexMatrix& n, Level level,
                                    const ToleranceProfile& tol,
                                    std::uint64_t seed) {
  if (m.dim != n.dim) {
    throw DimensionMismatch("complex flows of dimensions " +
                            std::to_string(m.dim) + " and " +
                            std::to_string(n.dim) + " cannot be compared");
  }
  const GeneratorMatrix ra = realify(m);
  const GeneratorMatrix rb = realify(n);
  switch (level) {
    case Level::Topological:
      return decide_topological(ra, rb, tol, seed);
    case Level::SomeHolder: {
      EquivalenceVerdict v = decide_topological(ra, rb, tol, seed);
      v.level = {Level::SomeHolder, {}};
      v.implied = implied_levels(v.level, v.equivalent);
      return v;
    }
    case Level::AllHolder:
      return decide_holder(ra, rb, tol, seed);
    case Level::Smooth:
      return decide_smooth(ra, rb, tol, seed);
    case Level::Lipschitz:
      if (m.dim > 2) {
        throw UnsupportedDimension(
            "lipschitz equivalence beyond the complex plane depends on a "
            "similarity notion outside this library's scope; only complex "
            "d <= 2 is classified");
      }
      return decide_lipschitz2(ra, rb, tol, seed);
    case Level::BetaMinus:
    case Level::BetaPlus:
      throw DomainError(
          "complex classification accepts the topological, some-holder, "
          "all-holder, lipschitz, and smooth levels only");
  }
  throw DomainError("unknown classification level");
}

}  // namespace linflow
