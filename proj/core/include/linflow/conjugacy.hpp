// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "linflow/equivalence.hpp"
#include "linflow/floweval.hpp"

namespace linflow {

namespace detail {
class MapNode;
}

// Regularity of a conjugating map on a bounded neighbourhood of the origin.
// All maps built here have inverses of the same class.
struct HolderClass {
  enum class Tag { Lipschitz, AllHolder, Beta };
  Tag tag = Tag::Lipschitz;
  double gamma = 1.0;  // exponent bound, meaningful when tag == Beta
};

// Combination rules: a product is as weak as its weakest part; composing
// beta(g1) with beta(g2) gives beta(g1 g2).
HolderClass weakest(const HolderClass& x, const HolderClass& y);
HolderClass composed(const HolderClass& outer, const HolderClass& inner);

// Invertible pointwise map of R^d fixing the origin, composable and
// serializable. Immutable after construction; evaluation is pure.
class ConjugacyMap {
 public:
  enum class Kind {
    BlockToDiag,
    ComplexBlockToDiag,
    Unwind,
    Power,
    Linear,
    Product,
    Composition,
  };

  Vec operator()(const Vec& x) const;
  Vec inverse_at(const Vec& y) const;

  ConjugacyMap inverted() const;
  bool is_inverted() const noexcept { return inverted_; }

  std::size_t dim_in() const;
  std::size_t dim_out() const;
  Kind kind() const;
  HolderClass holder_class() const;

  // {kind, parameters, children[]}; evaluation is reconstructible from the
  // document alone.
  std::string to_json(int indent = -1) const;
  static ConjugacyMap from_json(const std::string& text);

 private:
  explicit ConjugacyMap(std::shared_ptr<const detail::MapNode> node,
                        bool inverted = false);

  std::shared_ptr<const detail::MapNode> node_;
  bool inverted_ = false;

  friend ConjugacyMap build_block_to_diag(std::size_t m, double a);
  friend ConjugacyMap build_complex_block_to_diag(std::size_t m, double a,
                                                  double b);
  friend ConjugacyMap build_unwind(double a, double b);
  friend ConjugacyMap build_power_map(const Vec& a, const Vec& b, double alpha);
  friend ConjugacyMap linear_map(const GeneratorMatrix& q,
                                 const ToleranceProfile& tol);
  friend ConjugacyMap product_map(
      const std::vector<std::pair<ConjugacyMap, std::vector<Vec>>>& parts,
      const ToleranceProfile& tol);
  friend ConjugacyMap compose(const std::vector<ConjugacyMap>& stages);
  friend class detail::MapNode;
  friend struct PipelineBuilder;
};

std::string to_string(ConjugacyMap::Kind kind);

// The log-corrected triangular map taking the aI_m flow to the J_m(a) flow,
// with the convention 0 (log 0)^k = 0. Lipschitz for m = 1 (identity),
// Hoelder for every exponent below one but not Lipschitz for m >= 2. The
// inverse is evaluated by the triangular recursion.
ConjugacyMap build_block_to_diag(std::size_t m, double a);

// Planar analogue taking m identical spiral blocks diag[J_1(a+ib), ...] to
// the 2m-dimensional block J_m(a+ib); the log corrections read the norm of
// each input pair. The inverse recursion mirrors the real one blockwise,
// with the pair norms replacing absolute values.
ConjugacyMap build_complex_block_to_diag(std::size_t m, double a, double b);

// Bi-Lipschitz rotation unwind g(x) = R_{-b log|x|/a} x taking the
// J_1(a+ib) flow to the aI_2 flow.
ConjugacyMap build_unwind(double a, double b);

// Coordinatewise signed powers x_j -> sign(x_j) |x_j|^{alpha b_j / a_j},
// taking the diag(a) flow to the diag(b) flow with time rescaling alpha.
// Requires matching signs per coordinate and alpha > 0.
ConjugacyMap build_power_map(const Vec& a, const Vec& b, double alpha);

// Invertible linear substitution.
ConjugacyMap linear_map(const GeneratorMatrix& q, const ToleranceProfile& tol = {});

// Blockwise action of the parts in the adapted basis: part i acts on the
// coordinates of its span. The bases must be jointly complementary.
ConjugacyMap product_map(
    const std::vector<std::pair<ConjugacyMap, std::vector<Vec>>>& parts,
    const ToleranceProfile& tol = {});

// Composition applied first to last: compose({f, g}) sends x to g(f(x)).
ConjugacyMap compose(const std::vector<ConjugacyMap>& stages);

struct Pipeline {
  ConjugacyMap map;
  double alpha = 1.0;  // the rescaling the map realizes, equal to verdict alpha
};

// Assembles the conjugacy h with h(e^{tA}x) = e^{alpha t B} h(x) for an
// equivalent pair: Jordan bases, blockwise log/unwind reductions to
// diag[Lambda_S, A_C, Lambda_U], a hyperbolic power map plus a central
// linear witness, and the inverse reductions for B. DomainError when the
// verdict is not an equivalence with witness alpha.
Pipeline build_pipeline(const GeneratorMatrix& a, const GeneratorMatrix& b,
                        const EquivalenceVerdict& verdict,
                        const ToleranceProfile& tol = {},
                        std::uint64_t seed = kDefaultSeed);

// Deterministic sampling plan for verification and exponent estimation.
struct SamplingSpec {
  std::uint64_t seed = kDefaultSeed;
  std::size_t t_points = 33;
  double t_min = -3.0;
  double t_max = 3.0;
  std::size_t x_count = 100;
  double radius = 1.0;
  std::size_t pair_count = 800;  // pairs per regression direction
  double scale_decades = 10.0;   // spread of pair scales below the radius
};

// Sup over the grid of |h(e^{tA}x) - e^{alpha t B} h(x)| / (1 + |h(e^{tA}x)|).
// A large residual is a result, not an error.
double verify_relation(const ConjugacyMap& h, const GeneratorMatrix& a,
                       const GeneratorMatrix& b, double alpha,
                       const SamplingSpec& spec = {},
                       const ToleranceProfile& tol = {});

struct HolderEstimate {
  double beta = 1.0;     // min of the two regression slopes
  double forward = 1.0;  // slope of log|h(x)-h(y)| against log|x-y|
  double inverse = 1.0;
  double std_error = 0.0;  // larger standard error of the two slopes
  double constant = 1.0;   // exp of the forward intercept
};

// Least-squares Hoelder exponent over sampled pairs in B_radius(0), for both
// h and its inverse. A sanity check on the declared holder_class, not a
// certificate.
HolderEstimate estimate_holder_exponent(const ConjugacyMap& h, double radius,
                                        const SamplingSpec& spec = {});

}  // namespace linflow
