// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "json.hpp"
#include "linflow/conjugacy.hpp"
#include "linflow/errors.hpp"

namespace linflow::detail {

// Coordinates (or pair norms) below this are exact zeros inside the
// log-corrected maps, where 0 (log 0)^k = 0.
inline constexpr double kLogCutoff = 1e-300;

class MapNode {
 public:
  virtual ~MapNode() = default;

  virtual ConjugacyMap::Kind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Vec forward(const Vec& x) const = 0;
  virtual Vec backward(const Vec& y) const = 0;
  // Shared by the map and its inverse; every node is built that way.
  virtual HolderClass regularity() const = 0;
  virtual nlohmann::json parameters() const = 0;
  virtual std::vector<nlohmann::json> child_docs() const { return {}; }

  // {kind, parameters, children[]} without the inversion flag, which lives
  // on the wrapper.
  nlohmann::json doc() const;

  static ConjugacyMap wrap(std::shared_ptr<const MapNode> node, bool inverted);
  static const std::shared_ptr<const MapNode>& node_of(const ConjugacyMap& map);

 protected:
  void require_dim(const Vec& x) const;
};

// x (log|x|/a)^k / k!, the building block of the triangular maps.
inline double log_power_term(double v, double a, std::size_t k) {
  if (std::abs(v) < kLogCutoff) return 0.0;
  double term = v;
  const double l = std::log(std::abs(v)) / a;
  for (std::size_t i = 1; i <= k; ++i) term *= l / static_cast<double>(i);
  return term;
}

class BlockToDiagNode final : public MapNode {
 public:
  BlockToDiagNode(std::size_t m, double a) : m_(m), a_(a) {}

  ConjugacyMap::Kind kind() const override {
    return ConjugacyMap::Kind::BlockToDiag;
  }
  std::size_t dim() const override { return m_; }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override {
    return m_ == 1 ? HolderClass{HolderClass::Tag::Lipschitz, 1.0}
                   : HolderClass{HolderClass::Tag::AllHolder, 1.0};
  }
  nlohmann::json parameters() const override;

  double rate() const { return a_; }

 private:
  std::size_t m_;
  double a_;
};

class ComplexBlockToDiagNode final : public MapNode {
 public:
  ComplexBlockToDiagNode(std::size_t m, double a, double b)
      : m_(m), a_(a), b_(b) {}

  ConjugacyMap::Kind kind() const override {
    return ConjugacyMap::Kind::ComplexBlockToDiag;
  }
  std::size_t dim() const override { return 2 * m_; }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override {
    return m_ == 1 ? HolderClass{HolderClass::Tag::Lipschitz, 1.0}
                   : HolderClass{HolderClass::Tag::AllHolder, 1.0};
  }
  nlohmann::json parameters() const override;

 private:
  std::size_t m_;
  double a_, b_;
};

class UnwindNode final : public MapNode {
 public:
  UnwindNode(double a, double b) : a_(a), b_(b) {}

  ConjugacyMap::Kind kind() const override { return ConjugacyMap::Kind::Unwind; }
  std::size_t dim() const override { return 2; }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override {
    return {HolderClass::Tag::Lipschitz, 1.0};
  }
  nlohmann::json parameters() const override;

 private:
  Vec rotate(const Vec& x, double sign) const;

  double a_, b_;
};

class PowerNode final : public MapNode {
 public:
  explicit PowerNode(Vec exponents);

  ConjugacyMap::Kind kind() const override { return ConjugacyMap::Kind::Power; }
  std::size_t dim() const override { return exponents_.size(); }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override;
  nlohmann::json parameters() const override;

  const Vec& exponents() const { return exponents_; }

 private:
  Vec exponents_;  // all positive
  double gamma_ = 1.0;
};

class LinearNode final : public MapNode {
 public:
  LinearNode(GeneratorMatrix q, GeneratorMatrix qinv)
      : q_(std::move(q)), qinv_(std::move(qinv)) {}

  ConjugacyMap::Kind kind() const override { return ConjugacyMap::Kind::Linear; }
  std::size_t dim() const override { return q_.dim(); }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override {
    return {HolderClass::Tag::Lipschitz, 1.0};
  }
  nlohmann::json parameters() const override;

  const GeneratorMatrix& matrix() const { return q_; }
  const GeneratorMatrix& inverse() const { return qinv_; }

 private:
  GeneratorMatrix q_, qinv_;
};

class ProductNode final : public MapNode {
 public:
  ProductNode(std::vector<std::pair<ConjugacyMap, std::vector<Vec>>> parts,
              GeneratorMatrix basis, GeneratorMatrix basis_inv)
      : parts_(std::move(parts)),
        basis_(std::move(basis)),
        basis_inv_(std::move(basis_inv)) {}

  ConjugacyMap::Kind kind() const override {
    return ConjugacyMap::Kind::Product;
  }
  std::size_t dim() const override { return basis_.dim(); }
  Vec forward(const Vec& x) const override { return act(x, false); }
  Vec backward(const Vec& y) const override { return act(y, true); }
  HolderClass regularity() const override;
  nlohmann::json parameters() const override;
  std::vector<nlohmann::json> child_docs() const override;

  const std::vector<std::pair<ConjugacyMap, std::vector<Vec>>>& parts() const {
    return parts_;
  }

 private:
  Vec act(const Vec& x, bool inverse) const;

  std::vector<std::pair<ConjugacyMap, std::vector<Vec>>> parts_;
  GeneratorMatrix basis_, basis_inv_;  // columns grouped by part
};

class CompositionNode final : public MapNode {
 public:
  explicit CompositionNode(std::vector<ConjugacyMap> stages)
      : stages_(std::move(stages)) {}

  ConjugacyMap::Kind kind() const override {
    return ConjugacyMap::Kind::Composition;
  }
  std::size_t dim() const override { return stages_.front().dim_in(); }
  Vec forward(const Vec& x) const override;
  Vec backward(const Vec& y) const override;
  HolderClass regularity() const override;
  nlohmann::json parameters() const override;
  std::vector<nlohmann::json> child_docs() const override;

  const std::vector<ConjugacyMap>& stages() const { return stages_; }

 private:
  std::vector<ConjugacyMap> stages_;  // applied first to last
};

}  // namespace linflow::detail
