// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "internal.hpp"
#include "linflow/conjugacy.hpp"
#include "linflow/errors.hpp"
#include "linflow/flowstruct.hpp"
#include "map_nodes.hpp"

namespace linflow {

namespace {

using Kind = ConjugacyMap::Kind;

constexpr double kEntryZeroTol = 1e-12;
constexpr double kEntryUnitTol = 1e-9;

std::vector<std::size_t> iota_coords(std::size_t n) {
  std::vector<std::size_t> coords(n);
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  return coords;
}

std::vector<Vec> standard_basis(const std::vector<std::size_t>& coords,
                                std::size_t total) {
  std::vector<Vec> cols;
  cols.reserve(coords.size());
  for (std::size_t c : coords) {
    Vec e(total, 0.0);
    e[c] = 1.0;
    cols.push_back(std::move(e));
  }
  return cols;
}

// Fixes the sign ambiguity of every chain so that identical inputs produce
// identical bases and clean inputs keep signed permutation bases.
void normalize_chain_signs(RealJordanDecomposition& j) {
  const auto offsets = j.offsets();
  const std::size_t d = j.dim();
  for (std::size_t bi = 0; bi < j.blocks.size(); ++bi) {
    const std::size_t off = offsets[bi];
    const std::size_t s = j.blocks[bi].real_size();
    std::size_t lead = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < d; ++r) {
      const double v = std::abs(j.basis(r, off));
      if (v > best) {
        best = v;
        lead = r;
      }
    }
    if (j.basis(lead, off) < 0.0) {
      for (std::size_t c = off; c < off + s; ++c) {
        for (std::size_t r = 0; r < d; ++r) j.basis(r, c) = -j.basis(r, c);
        for (std::size_t r = 0; r < d; ++r) {
          j.basis_inv(c, r) = -j.basis_inv(c, r);
        }
      }
    }
  }
}

// Parts indexed by coordinate lists; untouched coordinates become one
// identity part. A single part spanning everything in order stays bare.
std::optional<ConjugacyMap> assemble_blockwise(
    std::vector<std::pair<ConjugacyMap, std::vector<std::size_t>>> parts,
    std::vector<std::size_t> leftover, std::size_t total,
    const ToleranceProfile& tol) {
  if (parts.empty()) return std::nullopt;
  if (parts.size() == 1 && leftover.empty() &&
      parts.front().second == iota_coords(total)) {
    return parts.front().first;
  }
  if (!leftover.empty()) {
    parts.emplace_back(linear_map(GeneratorMatrix::identity(leftover.size())),
                       std::move(leftover));
  }
  std::vector<std::pair<ConjugacyMap, std::vector<Vec>>> spans;
  spans.reserve(parts.size());
  for (auto& [part, coords] : parts) {
    spans.emplace_back(std::move(part), standard_basis(coords, total));
  }
  return product_map(spans, tol);
}

// Blockwise map from the Jordan flow coordinates to coordinates in which
// every hyperbolic block acts as a pure rate; central blocks stay put.
std::optional<ConjugacyMap> reduction(const RealJordanDecomposition& j,
                                      const ToleranceProfile& tol) {
  const auto offsets = j.offsets();
  std::vector<std::pair<ConjugacyMap, std::vector<std::size_t>>> parts;
  std::vector<std::size_t> leftover;
  for (std::size_t bi = 0; bi < j.blocks.size(); ++bi) {
    const auto& block = j.blocks[bi];
    const std::size_t off = offsets[bi];
    const std::size_t s = block.real_size();
    std::vector<std::size_t> coords(s);
    std::iota(coords.begin(), coords.end(), off);
    if (block.z.real() == 0.0) {
      leftover.insert(leftover.end(), coords.begin(), coords.end());
      continue;
    }
    if (block.z.imag() == 0.0) {
      if (block.m == 1) {
        leftover.push_back(off);
        continue;
      }
      parts.emplace_back(
          build_block_to_diag(block.m, block.z.real()).inverted(),
          std::move(coords));
      continue;
    }
    // Stacked J_m(a+ib) coordinates: first to m interleaved spiral pairs,
    // then each pair unwinds to the pure rate.
    ConjugacyMap unwind = build_unwind(block.z.real(), block.z.imag());
    ConjugacyMap stage = unwind;
    if (block.m > 1) {
      std::vector<std::pair<ConjugacyMap, std::vector<std::size_t>>> pairs;
      for (std::size_t p = 0; p < block.m; ++p) {
        pairs.emplace_back(unwind,
                           std::vector<std::size_t>{2 * p, 2 * p + 1});
      }
      ConjugacyMap unwinds = *assemble_blockwise(std::move(pairs), {}, s, tol);
      stage = compose(
          {build_complex_block_to_diag(block.m, block.z.real(), block.z.imag())
               .inverted(),
           unwinds});
    }
    parts.emplace_back(std::move(stage), std::move(coords));
  }
  return assemble_blockwise(std::move(parts), std::move(leftover), j.dim(),
                            tol);
}

GeneratorMatrix central_generator(const RealJordanDecomposition& j) {
  std::size_t c = 0;
  for (const auto& block : j.blocks) {
    if (block.z.real() == 0.0) c += block.real_size();
  }
  GeneratorMatrix out(c);
  std::size_t off = 0;
  for (const auto& block : j.blocks) {
    if (block.z.real() != 0.0) continue;
    const GeneratorMatrix m = block.matrix();
    for (std::size_t r = 0; r < m.dim(); ++r) {
      for (std::size_t col = 0; col < m.dim(); ++col) {
        out(off + r, off + col) = m(r, col);
      }
    }
    off += m.dim();
  }
  return out;
}

// Power map on the hyperbolic coordinates paired elementwise in block order,
// and a linear similarity witness on the central coordinates.
std::optional<ConjugacyMap> middle_stage(const RealJordanDecomposition& ja,
                                         const RealJordanDecomposition& jb,
                                         double alpha,
                                         const ToleranceProfile& tol,
                                         std::uint64_t seed) {
  Vec a_rates, b_rates;
  std::vector<std::size_t> hyp, cent;
  const auto offsets_a = ja.offsets();
  for (std::size_t bi = 0; bi < ja.blocks.size(); ++bi) {
    const auto& block = ja.blocks[bi];
    for (std::size_t k = 0; k < block.real_size(); ++k) {
      const std::size_t coord = offsets_a[bi] + k;
      if (block.z.real() == 0.0) {
        cent.push_back(coord);
      } else {
        hyp.push_back(coord);
        a_rates.push_back(block.z.real());
      }
    }
  }
  for (const auto& block : jb.blocks) {
    if (block.z.real() == 0.0) continue;
    b_rates.insert(b_rates.end(), block.real_size(), block.z.real());
  }
  if (a_rates.size() != b_rates.size()) {
    throw DomainError(
        "the verdict does not match the stable and unstable dimensions of "
        "the pair");
  }

  std::vector<std::pair<ConjugacyMap, std::vector<std::size_t>>> parts;
  std::vector<std::size_t> leftover;
  if (!hyp.empty()) {
    Vec exponents(a_rates.size());
    bool trivial = true;
    for (std::size_t i = 0; i < a_rates.size(); ++i) {
      exponents[i] = alpha * b_rates[i] / a_rates[i];
      trivial = trivial && exponents[i] == 1.0;
    }
    if (trivial) {
      leftover.insert(leftover.end(), hyp.begin(), hyp.end());
    } else {
      parts.emplace_back(build_power_map(a_rates, b_rates, alpha),
                         std::move(hyp));
    }
  }
  if (!cent.empty()) {
    const GeneratorMatrix ac = central_generator(ja);
    GeneratorMatrix bc = central_generator(jb);
    if (ac.dim() != bc.dim()) {
      throw DomainError(
          "the verdict does not match the central dimensions of the pair");
    }
    bc *= alpha;
    GeneratorMatrix diff = ac;
    diff -= bc;
    if (diff.norm() <= tol.residual_tol * (1.0 + ac.norm())) {
      leftover.insert(leftover.end(), cent.begin(), cent.end());
    } else {
      const auto witness = find_similarity(ac, bc, tol, seed);
      if (!witness) {
        throw DomainError(
            "the verdict claims equivalence but the central parts are not "
            "similar at the witness rescaling");
      }
      parts.emplace_back(linear_map(*witness, tol), std::move(cent));
    }
  }
  return assemble_blockwise(std::move(parts), std::move(leftover), ja.dim(),
                            tol);
}

const detail::LinearNode* as_linear(const ConjugacyMap& s) {
  return dynamic_cast<const detail::LinearNode*>(
      detail::MapNode::node_of(s).get());
}

GeneratorMatrix effective_matrix(const ConjugacyMap& s) {
  const auto* node = as_linear(s);
  return s.is_inverted() ? node->inverse() : node->matrix();
}

Vec effective_exponents(const ConjugacyMap& s) {
  const auto* node = dynamic_cast<const detail::PowerNode*>(
      detail::MapNode::node_of(s).get());
  Vec e = node->exponents();
  if (s.is_inverted()) {
    for (auto& v : e) v = 1.0 / v;
  }
  return e;
}

bool is_identity_stage(const ConjugacyMap& s) {
  if (s.kind() == Kind::Linear) {
    const GeneratorMatrix q = effective_matrix(s);
    GeneratorMatrix diff = q;
    diff -= GeneratorMatrix::identity(q.dim());
    return diff.norm() <= kEntryZeroTol * (1.0 + q.norm());
  }
  if (s.kind() == Kind::Power) {
    const Vec e = effective_exponents(s);
    return std::all_of(e.begin(), e.end(),
                       [](double v) { return v == 1.0; });
  }
  return false;
}

void flatten_into(const ConjugacyMap& stage, std::vector<ConjugacyMap>& out) {
  if (stage.kind() == Kind::Composition) {
    const auto* node = dynamic_cast<const detail::CompositionNode*>(
        detail::MapNode::node_of(stage).get());
    if (stage.is_inverted()) {
      const auto& stages = node->stages();
      for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        flatten_into(it->inverted(), out);
      }
    } else {
      for (const auto& child : node->stages()) flatten_into(child, out);
    }
    return;
  }
  out.push_back(stage);
}

bool same_node_doc(const ConjugacyMap& x, const ConjugacyMap& y) {
  return detail::MapNode::node_of(x)->doc() ==
         detail::MapNode::node_of(y)->doc();
}

// Signed permutation: one entry of unit size per row and column.
bool signed_permutation(const GeneratorMatrix& q,
                        std::vector<std::size_t>& perm) {
  const std::size_t d = q.dim();
  perm.assign(d, d);
  std::vector<bool> used(d, false);
  for (std::size_t r = 0; r < d; ++r) {
    std::size_t hit = d;
    for (std::size_t c = 0; c < d; ++c) {
      const double v = std::abs(q(r, c));
      if (v <= kEntryZeroTol) continue;
      if (std::abs(v - 1.0) > kEntryUnitTol || hit != d) return false;
      hit = c;
    }
    if (hit == d || used[hit]) return false;
    used[hit] = true;
    perm[r] = hit;
  }
  return true;
}

ConjugacyMap merge_linears(const ConjugacyMap& first,
                           const ConjugacyMap& second,
                           const ToleranceProfile& tol) {
  const Eigen::MatrixXd q = detail::to_eigen(effective_matrix(second)) *
                            detail::to_eigen(effective_matrix(first));
  return linear_map(detail::from_eigen(q), tol);
}

// A power map conjugated by a signed permutation is the power map with
// permuted exponents; the signs pass through the odd coordinate powers.
std::optional<ConjugacyMap> collapse_triple(const ConjugacyMap& pre,
                                            const ConjugacyMap& power,
                                            const ConjugacyMap& post) {
  const GeneratorMatrix sigma = effective_matrix(pre);
  const GeneratorMatrix tau = effective_matrix(post);
  std::vector<std::size_t> perm, perm_post;
  if (!signed_permutation(sigma, perm) || !signed_permutation(tau, perm_post)) {
    return std::nullopt;
  }
  const Eigen::MatrixXd prod =
      detail::to_eigen(tau) * detail::to_eigen(sigma);
  if ((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).norm() >
      kEntryUnitTol) {
    return std::nullopt;
  }
  const Vec e = effective_exponents(power);
  Vec permuted(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) permuted[perm[j]] = e[j];
  return build_power_map(Vec(permuted.size(), 1.0), permuted, 1.0);
}

ConjugacyMap simplify(const std::vector<ConjugacyMap>& raw, std::size_t dim,
                      const ToleranceProfile& tol) {
  std::vector<ConjugacyMap> flat;
  for (const auto& stage : raw) flatten_into(stage, flat);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < flat.size();) {
      if (is_identity_stage(flat[i])) {
        flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        continue;
      }
      ++i;
    }
    for (std::size_t i = 0; i + 1 < flat.size();) {
      if (flat[i].is_inverted() != flat[i + 1].is_inverted() &&
          same_node_doc(flat[i], flat[i + 1])) {
        flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(i),
                   flat.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        continue;
      }
      ++i;
    }
    for (std::size_t i = 0; i + 1 < flat.size();) {
      if (flat[i].kind() == Kind::Linear &&
          flat[i + 1].kind() == Kind::Linear) {
        flat[i] = merge_linears(flat[i], flat[i + 1], tol);
        flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        changed = true;
        continue;
      }
      ++i;
    }
    for (std::size_t i = 0; i + 2 < flat.size(); ++i) {
      if (flat[i].kind() != Kind::Linear ||
          flat[i + 1].kind() != Kind::Power ||
          flat[i + 2].kind() != Kind::Linear) {
        continue;
      }
      auto collapsed = collapse_triple(flat[i], flat[i + 1], flat[i + 2]);
      if (collapsed) {
        flat[i] = *collapsed;
        flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   flat.begin() + static_cast<std::ptrdiff_t>(i) + 3);
        changed = true;
        break;
      }
    }
  }

  if (flat.empty()) return linear_map(GeneratorMatrix::identity(dim));
  if (flat.size() == 1) return flat.front();
  return compose(flat);
}

ConjugacyMap core_build(const GeneratorMatrix& a, const GeneratorMatrix& b,
                        double alpha, const ToleranceProfile& tol,
                        std::uint64_t seed) {
  RealJordanDecomposition ja = real_jordan(a, tol);
  RealJordanDecomposition jb = real_jordan(b, tol);
  normalize_chain_signs(ja);
  normalize_chain_signs(jb);

  std::vector<ConjugacyMap> stages;
  stages.push_back(linear_map(ja.basis_inv, tol));
  if (auto reduce_a = reduction(ja, tol)) stages.push_back(*reduce_a);
  if (auto mid = middle_stage(ja, jb, alpha, tol, seed)) {
    stages.push_back(*mid);
  }
  if (auto reduce_b = reduction(jb, tol)) {
    stages.push_back(reduce_b->inverted());
  }
  stages.push_back(linear_map(jb.basis, tol));
  return simplify(stages, a.dim(), tol);
}

}  // namespace

Pipeline build_pipeline(const GeneratorMatrix& a, const GeneratorMatrix& b,
                        const EquivalenceVerdict& verdict,
                        const ToleranceProfile& tol, std::uint64_t seed) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(a.display_name() + " is " +
                            std::to_string(a.dim()) + "-dimensional but " +
                            b.display_name() + " is " +
                            std::to_string(b.dim()) + "-dimensional");
  }
  if (!verdict.equivalent || !verdict.alpha) {
    throw DomainError(
        "the pipeline needs an equivalence verdict carrying a witness "
        "rescaling");
  }
  const double alpha = *verdict.alpha;
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw DomainError("the witness rescaling must be nonzero and finite");
  }
  if (a.dim() == 0) {
    return {linear_map(GeneratorMatrix(0)), alpha};
  }
  if (alpha < 0.0) {
    return {core_build(time_reverse(a), b, -alpha, tol, seed), alpha};
  }
  return {core_build(a, b, alpha, tol, seed), alpha};
}

}  // namespace linflow
