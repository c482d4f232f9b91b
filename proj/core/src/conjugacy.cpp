// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "linflow/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <utility>

#include "internal.hpp"
#include "linflow/errors.hpp"
#include "map_nodes.hpp"

namespace linflow {

namespace detail {

nlohmann::json MapNode::doc() const {
  nlohmann::json d;
  d["kind"] = to_string(kind());
  d["parameters"] = parameters();
  d["children"] = child_docs();
  return d;
}

ConjugacyMap MapNode::wrap(std::shared_ptr<const MapNode> node, bool inverted) {
  return ConjugacyMap(std::move(node), inverted);
}

const std::shared_ptr<const MapNode>& MapNode::node_of(const ConjugacyMap& map) {
  return map.node_;
}

void MapNode::require_dim(const Vec& x) const {
  if (x.size() != dim()) {
    throw DimensionMismatch("conjugacy map of dimension " +
                            std::to_string(dim()) + " applied to a vector of " +
                            "dimension " + std::to_string(x.size()));
  }
}

Vec BlockToDiagNode::forward(const Vec& x) const {
  require_dim(x);
  Vec y(m_, 0.0);
  for (std::size_t j = 1; j <= m_; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k + j <= m_; ++k) {
      acc += log_power_term(x[m_ - j - k], a_, k);
    }
    y[j - 1] = acc;
  }
  return y;
}

Vec BlockToDiagNode::backward(const Vec& y) const {
  require_dim(y);
  Vec x(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double acc = y[m_ - 1 - i];
    for (std::size_t k = 1; k <= i; ++k) {
      acc -= log_power_term(x[i - k], a_, k);
    }
    x[i] = acc;
  }
  return x;
}

nlohmann::json BlockToDiagNode::parameters() const {
  return {{"m", m_}, {"a", a_}};
}

// Input pair i occupies coordinates (2i, 2i+1); output pair j occupies
// (j, m+j). The log corrections read pair norms, which the spiral rotation
// leaves invariant.
Vec ComplexBlockToDiagNode::forward(const Vec& x) const {
  require_dim(x);
  Vec y(2 * m_, 0.0);
  for (std::size_t j = 1; j <= m_; ++j) {
    double au = 0.0, av = 0.0;
    for (std::size_t k = 0; k + j <= m_; ++k) {
      const std::size_t p = m_ - j - k;
      const double u = x[2 * p], v = x[2 * p + 1];
      const double r = std::hypot(u, v);
      if (r < kLogCutoff) continue;
      double c = 1.0;
      const double l = std::log(r) / a_;
      for (std::size_t i = 1; i <= k; ++i) c *= l / static_cast<double>(i);
      au += c * u;
      av += c * v;
    }
    y[j - 1] = au;
    y[m_ + j - 1] = av;
  }
  return y;
}

Vec ComplexBlockToDiagNode::backward(const Vec& y) const {
  require_dim(y);
  std::vector<std::pair<double, double>> pair(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    double u = y[m_ - 1 - i], v = y[2 * m_ - 1 - i];
    for (std::size_t k = 1; k <= i; ++k) {
      const auto& [pu, pv] = pair[i - k];
      const double r = std::hypot(pu, pv);
      if (r < kLogCutoff) continue;
      double c = 1.0;
      const double l = std::log(r) / a_;
      for (std::size_t t = 1; t <= k; ++t) c *= l / static_cast<double>(t);
      u -= c * pu;
      v -= c * pv;
    }
    pair[i] = {u, v};
  }
  Vec x(2 * m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    x[2 * i] = pair[i].first;
    x[2 * i + 1] = pair[i].second;
  }
  return x;
}

nlohmann::json ComplexBlockToDiagNode::parameters() const {
  return {{"m", m_}, {"a", a_}, {"b", b_}};
}

Vec UnwindNode::rotate(const Vec& x, double sign) const {
  const double r = std::hypot(x[0], x[1]);
  if (r < kLogCutoff) return x;
  const double theta = sign * b_ * std::log(r) / a_;
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * x[0] - s * x[1], s * x[0] + c * x[1]};
}

Vec UnwindNode::forward(const Vec& x) const {
  require_dim(x);
  return rotate(x, -1.0);
}

Vec UnwindNode::backward(const Vec& y) const {
  require_dim(y);
  return rotate(y, 1.0);
}

nlohmann::json UnwindNode::parameters() const {
  return {{"a", a_}, {"b", b_}};
}

PowerNode::PowerNode(Vec exponents) : exponents_(std::move(exponents)) {
  for (double e : exponents_) {
    gamma_ = std::min(gamma_, std::min(e, 1.0 / e));
  }
}

Vec PowerNode::forward(const Vec& x) const {
  require_dim(x);
  Vec y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = std::copysign(std::pow(std::abs(x[j]), exponents_[j]), x[j]);
  }
  return y;
}

Vec PowerNode::backward(const Vec& y) const {
  require_dim(y);
  Vec x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    x[j] = std::copysign(std::pow(std::abs(y[j]), 1.0 / exponents_[j]), y[j]);
  }
  return x;
}

HolderClass PowerNode::regularity() const {
  if (gamma_ >= 1.0) return {HolderClass::Tag::Lipschitz, 1.0};
  return {HolderClass::Tag::Beta, gamma_};
}

nlohmann::json PowerNode::parameters() const {
  return {{"exponents", exponents_}};
}

Vec LinearNode::forward(const Vec& x) const {
  require_dim(x);
  return q_.apply(x);
}

Vec LinearNode::backward(const Vec& y) const {
  require_dim(y);
  return qinv_.apply(y);
}

nlohmann::json LinearNode::parameters() const {
  return {{"dim", q_.dim()}, {"entries", q_.entries()}};
}

Vec ProductNode::act(const Vec& x, bool inverse) const {
  require_dim(x);
  Vec c = basis_inv_.apply(x);
  Vec out(c.size());
  std::size_t off = 0;
  for (const auto& [part, basis] : parts_) {
    const std::size_t n = part.dim_in();
    Vec slice(c.begin() + off, c.begin() + off + n);
    Vec mapped = inverse ? part.inverse_at(slice) : part(slice);
    std::copy(mapped.begin(), mapped.end(), out.begin() + off);
    off += n;
  }
  return basis_.apply(out);
}

HolderClass ProductNode::regularity() const {
  HolderClass acc{HolderClass::Tag::Lipschitz, 1.0};
  for (const auto& [part, basis] : parts_) {
    acc = weakest(acc, part.holder_class());
  }
  return acc;
}

nlohmann::json ProductNode::parameters() const {
  auto bases = nlohmann::json::array();
  for (const auto& [part, basis] : parts_) bases.push_back(basis);
  return {{"bases", bases}};
}

std::vector<nlohmann::json> ProductNode::child_docs() const {
  std::vector<nlohmann::json> docs;
  docs.reserve(parts_.size());
  for (const auto& [part, basis] : parts_) {
    nlohmann::json d = node_of(part)->doc();
    d["inverted"] = part.is_inverted();
    docs.push_back(std::move(d));
  }
  return docs;
}

Vec CompositionNode::forward(const Vec& x) const {
  require_dim(x);
  Vec y = x;
  for (const auto& stage : stages_) y = stage(y);
  return y;
}

Vec CompositionNode::backward(const Vec& y) const {
  require_dim(y);
  Vec x = y;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    x = it->inverse_at(x);
  }
  return x;
}

HolderClass CompositionNode::regularity() const {
  HolderClass acc = stages_.front().holder_class();
  for (std::size_t i = 1; i < stages_.size(); ++i) {
    acc = composed(stages_[i].holder_class(), acc);
  }
  return acc;
}

nlohmann::json CompositionNode::parameters() const {
  return nlohmann::json::object();
}

std::vector<nlohmann::json> CompositionNode::child_docs() const {
  std::vector<nlohmann::json> docs;
  docs.reserve(stages_.size());
  for (const auto& stage : stages_) {
    nlohmann::json d = node_of(stage)->doc();
    d["inverted"] = stage.is_inverted();
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace detail

HolderClass weakest(const HolderClass& x, const HolderClass& y) {
  using Tag = HolderClass::Tag;
  if (x.tag == Tag::Beta || y.tag == Tag::Beta) {
    const double gx = x.tag == Tag::Beta ? x.gamma : 1.0;
    const double gy = y.tag == Tag::Beta ? y.gamma : 1.0;
    return {Tag::Beta, std::min(gx, gy)};
  }
  if (x.tag == Tag::AllHolder || y.tag == Tag::AllHolder) {
    return {Tag::AllHolder, 1.0};
  }
  return {Tag::Lipschitz, 1.0};
}

HolderClass composed(const HolderClass& outer, const HolderClass& inner) {
  using Tag = HolderClass::Tag;
  if (outer.tag == Tag::Beta || inner.tag == Tag::Beta) {
    const double go = outer.tag == Tag::Beta ? outer.gamma : 1.0;
    const double gi = inner.tag == Tag::Beta ? inner.gamma : 1.0;
    return {Tag::Beta, go * gi};
  }
  if (outer.tag == Tag::AllHolder || inner.tag == Tag::AllHolder) {
    return {Tag::AllHolder, 1.0};
  }
  return {Tag::Lipschitz, 1.0};
}

ConjugacyMap::ConjugacyMap(std::shared_ptr<const detail::MapNode> node,
                           bool inverted)
    : node_(std::move(node)), inverted_(inverted) {}

Vec ConjugacyMap::operator()(const Vec& x) const {
  return inverted_ ? node_->backward(x) : node_->forward(x);
}

Vec ConjugacyMap::inverse_at(const Vec& y) const {
  return inverted_ ? node_->forward(y) : node_->backward(y);
}

ConjugacyMap ConjugacyMap::inverted() const {
  return ConjugacyMap(node_, !inverted_);
}

std::size_t ConjugacyMap::dim_in() const { return node_->dim(); }
std::size_t ConjugacyMap::dim_out() const { return node_->dim(); }

ConjugacyMap::Kind ConjugacyMap::kind() const { return node_->kind(); }

HolderClass ConjugacyMap::holder_class() const { return node_->regularity(); }

std::string to_string(ConjugacyMap::Kind kind) {
  switch (kind) {
    case ConjugacyMap::Kind::BlockToDiag:
      return "block-to-diag";
    case ConjugacyMap::Kind::ComplexBlockToDiag:
      return "complex-block-to-diag";
    case ConjugacyMap::Kind::Unwind:
      return "unwind";
    case ConjugacyMap::Kind::Power:
      return "power";
    case ConjugacyMap::Kind::Linear:
      return "linear";
    case ConjugacyMap::Kind::Product:
      return "product";
    case ConjugacyMap::Kind::Composition:
      return "composition";
  }
  return "unknown";
}

std::string ConjugacyMap::to_json(int indent) const {
  nlohmann::json d = node_->doc();
  d["inverted"] = inverted_;
  return d.dump(indent);
}

namespace {

ConjugacyMap map_from_doc(const nlohmann::json& d) {
  const std::string kind = d.at("kind").get<std::string>();
  const nlohmann::json params =
      d.contains("parameters") ? d.at("parameters") : nlohmann::json::object();
  const nlohmann::json children =
      d.contains("children") ? d.at("children") : nlohmann::json::array();

  std::optional<ConjugacyMap> map;
  if (kind == "block-to-diag") {
    map = build_block_to_diag(params.at("m").get<std::size_t>(),
                              params.at("a").get<double>());
  } else if (kind == "complex-block-to-diag") {
    map = build_complex_block_to_diag(params.at("m").get<std::size_t>(),
                                      params.at("a").get<double>(),
                                      params.at("b").get<double>());
  } else if (kind == "unwind") {
    map = build_unwind(params.at("a").get<double>(),
                       params.at("b").get<double>());
  } else if (kind == "power") {
    const Vec exponents = params.at("exponents").get<Vec>();
    map = build_power_map(Vec(exponents.size(), 1.0), exponents, 1.0);
  } else if (kind == "linear") {
    map = linear_map(GeneratorMatrix(params.at("dim").get<std::size_t>(),
                                     params.at("entries").get<Vec>()));
  } else if (kind == "product") {
    const auto bases = params.at("bases").get<std::vector<std::vector<Vec>>>();
    if (bases.size() != children.size()) {
      throw ParseError("product document must carry one basis per child");
    }
    std::vector<std::pair<ConjugacyMap, std::vector<Vec>>> parts;
    parts.reserve(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) {
      parts.emplace_back(map_from_doc(children[i]), bases[i]);
    }
    map = product_map(parts);
  } else if (kind == "composition") {
    std::vector<ConjugacyMap> stages;
    stages.reserve(children.size());
    for (const auto& child : children) stages.push_back(map_from_doc(child));
    map = compose(stages);
  } else {
    throw ParseError("unknown conjugacy map kind: " + kind);
  }

  if (d.contains("inverted") && d.at("inverted").get<bool>()) {
    return map->inverted();
  }
  return *map;
}

}  // namespace

ConjugacyMap ConjugacyMap::from_json(const std::string& text) {
  nlohmann::json d;
  try {
    d = nlohmann::json::parse(text);
    return map_from_doc(d);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("conjugacy map document: ") + e.what());
  }
}

ConjugacyMap build_block_to_diag(std::size_t m, double a) {
  if (m == 0) throw DomainError("block size must be positive");
  if (!std::isfinite(a) || a == 0.0) {
    throw DomainError("the block to diag map needs a nonzero finite rate");
  }
  return detail::MapNode::wrap(std::make_shared<detail::BlockToDiagNode>(m, a),
                               false);
}

ConjugacyMap build_complex_block_to_diag(std::size_t m, double a, double b) {
  if (m == 0) throw DomainError("block size must be positive");
  if (!std::isfinite(a) || a == 0.0 || !std::isfinite(b)) {
    throw DomainError(
        "the complex block to diag map needs a nonzero finite real rate");
  }
  return detail::MapNode::wrap(
      std::make_shared<detail::ComplexBlockToDiagNode>(m, a, b), false);
}

ConjugacyMap build_unwind(double a, double b) {
  if (!std::isfinite(a) || a == 0.0 || !std::isfinite(b)) {
    throw DomainError("the unwind map needs a nonzero finite real rate");
  }
  return detail::MapNode::wrap(std::make_shared<detail::UnwindNode>(a, b),
                               false);
}

ConjugacyMap build_power_map(const Vec& a, const Vec& b, double alpha) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("power map rate lists differ in length: " +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw DomainError("power map rescaling must be positive and finite");
  }
  Vec exponents(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!std::isfinite(a[j]) || !std::isfinite(b[j]) || a[j] == 0.0 ||
        b[j] == 0.0 || std::signbit(a[j]) != std::signbit(b[j])) {
      throw DomainError(
          "power map rates must be nonzero and matched in sign per "
          "coordinate");
    }
    exponents[j] = alpha * b[j] / a[j];
  }
  return detail::MapNode::wrap(
      std::make_shared<detail::PowerNode>(std::move(exponents)), false);
}

ConjugacyMap linear_map(const GeneratorMatrix& q, const ToleranceProfile& tol) {
  if (!q.is_finite()) {
    throw DomainError("linear conjugacy needs finite entries: " +
                      q.display_name());
  }
  const std::size_t d = q.dim();
  if (d == 0) {
    return detail::MapNode::wrap(
        std::make_shared<detail::LinearNode>(q, q), false);
  }
  const Eigen::MatrixXd eq = detail::to_eigen(q);
  if (detail::rank_of(eq, tol.rank_tol) < d) {
    throw DomainError("linear conjugacy needs an invertible matrix: " +
                      q.display_name());
  }
  const Eigen::MatrixXd inv = eq.partialPivLu().inverse();
  if (!inv.allFinite()) {
    throw NumericalFailure("linear conjugacy inverse overflowed: " +
                           q.display_name());
  }
  return detail::MapNode::wrap(
      std::make_shared<detail::LinearNode>(q, detail::from_eigen(inv)), false);
}

ConjugacyMap product_map(
    const std::vector<std::pair<ConjugacyMap, std::vector<Vec>>>& parts,
    const ToleranceProfile& tol) {
  std::size_t total = 0;
  for (const auto& [part, basis] : parts) {
    if (part.dim_in() != basis.size()) {
      throw DimensionMismatch(
          "product part of dimension " + std::to_string(part.dim_in()) +
          " paired with a basis of " + std::to_string(basis.size()) +
          " columns");
    }
    total += basis.size();
  }
  std::vector<Vec> columns;
  columns.reserve(total);
  for (const auto& [part, basis] : parts) {
    for (const auto& col : basis) {
      if (col.size() != total) {
        throw DimensionMismatch(
            "product basis columns must have the ambient dimension " +
            std::to_string(total));
      }
      columns.push_back(col);
    }
  }
  if (total == 0) {
    GeneratorMatrix empty(0);
    return detail::MapNode::wrap(
        std::make_shared<detail::ProductNode>(
            std::vector<std::pair<ConjugacyMap, std::vector<Vec>>>{}, empty,
            empty),
        false);
  }
  const Eigen::MatrixXd b = detail::matrix_from_columns(total, columns);
  if (detail::rank_of(b, tol.rank_tol) < total) {
    throw DomainError("product bases must be jointly complementary");
  }
  const Eigen::MatrixXd binv = b.partialPivLu().inverse();
  return detail::MapNode::wrap(
      std::make_shared<detail::ProductNode>(parts, detail::from_eigen(b),
                                            detail::from_eigen(binv)),
      false);
}

ConjugacyMap compose(const std::vector<ConjugacyMap>& stages) {
  if (stages.empty()) {
    throw DomainError("composition needs at least one stage");
  }
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    if (stages[i].dim_out() != stages[i + 1].dim_in()) {
      throw DimensionMismatch(
          "composition stages " + std::to_string(i) + " and " +
          std::to_string(i + 1) + " have incompatible dimensions " +
          std::to_string(stages[i].dim_out()) + " and " +
          std::to_string(stages[i + 1].dim_in()));
    }
  }
  if (stages.size() == 1) return stages.front();
  return detail::MapNode::wrap(
      std::make_shared<detail::CompositionNode>(stages), false);
}

namespace {

// Uniform point in the radius ball: Gaussian direction, U^{1/d} radial law.
Vec ball_point(std::mt19937_64& eng, std::size_t d, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec g(d);
  double norm = 0.0;
  for (auto& v : g) {
    v = gauss(eng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  const double r =
      radius * std::pow(unif(eng), 1.0 / static_cast<double>(d));
  if (norm < 1e-300) return Vec(d, 0.0);
  for (auto& v : g) v *= r / norm;
  return g;
}

double norm_of(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance_of(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double verify_relation(const ConjugacyMap& h, const GeneratorMatrix& a,
                       const GeneratorMatrix& b, double alpha,
                       const SamplingSpec& spec, const ToleranceProfile& tol) {
  if (h.dim_in() != a.dim() || h.dim_out() != b.dim()) {
    throw DimensionMismatch(
        "the map sends dimension " + std::to_string(h.dim_in()) + " to " +
        std::to_string(h.dim_out()) + " but the flows act on " +
        std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  if (!std::isfinite(alpha)) {
    throw DomainError("the rescaling must be finite");
  }
  if (a.dim() == 0 || spec.t_points == 0 || spec.x_count == 0) return 0.0;

  const FlowOperator fa(a, tol);
  const FlowOperator fb(b, tol);
  auto eng = detail::seeded_engine(spec.seed, 0x53u);

  std::vector<Vec> points(spec.x_count);
  std::vector<Vec> images(spec.x_count);
  for (std::size_t i = 0; i < spec.x_count; ++i) {
    points[i] = ball_point(eng, a.dim(), spec.radius);
    images[i] = h(points[i]);
  }

  double sup = 0.0;
  for (std::size_t ti = 0; ti < spec.t_points; ++ti) {
    const double t =
        spec.t_points == 1
            ? spec.t_min
            : spec.t_min + (spec.t_max - spec.t_min) *
                               static_cast<double>(ti) /
                               static_cast<double>(spec.t_points - 1);
    const GeneratorMatrix ea = fa.at(t);
    const GeneratorMatrix eb = fb.at(alpha * t);
    for (std::size_t i = 0; i < spec.x_count; ++i) {
      const Vec lhs = h(ea.apply(points[i]));
      const Vec rhs = eb.apply(images[i]);
      const double res = distance_of(lhs, rhs) / (1.0 + norm_of(lhs));
      if (!std::isfinite(res)) {
        return std::numeric_limits<double>::infinity();
      }
      sup = std::max(sup, res);
    }
  }
  return sup;
}

namespace {

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares line of log separation after mapping against log separation
// before, over pairs drawn at a common random scale below the radius.
SlopeFit fit_direction(const ConjugacyMap& h, bool inverse, double radius,
                       const SamplingSpec& spec, std::uint64_t stream) {
  auto eng = detail::seeded_engine(spec.seed, stream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t d = h.dim_in();

  std::vector<double> lx, ly;
  lx.reserve(spec.pair_count);
  ly.reserve(spec.pair_count);
  for (std::size_t n = 0; n < spec.pair_count; ++n) {
    const double s = radius * std::pow(10.0, -spec.scale_decades * unif(eng));
    Vec x(d), y(d);
    for (auto& v : x) v = s * gauss(eng);
    for (auto& v : y) v = s * gauss(eng);
    const Vec fx = inverse ? h.inverse_at(x) : h(x);
    const Vec fy = inverse ? h.inverse_at(y) : h(y);
    const double dx = distance_of(x, y);
    const double dy = distance_of(fx, fy);
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) ||
        !std::isfinite(dy)) {
      continue;
    }
    lx.push_back(std::log(dx));
    ly.push_back(std::log(dy));
  }

  const std::size_t n = lx.size();
  if (n < 3) return {};
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ex = lx[i] - mx, ey = ly[i] - my;
    sxx += ex * ex;
    sxy += ex * ey;
    syy += ey * ey;
  }
  if (!(sxx > 0.0)) return {};
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double rss = std::max(0.0, syy - fit.slope * sxy);
  fit.std_error =
      std::sqrt(rss / (static_cast<double>(n - 2) * sxx));
  return fit;
}

}  // namespace

HolderEstimate estimate_holder_exponent(const ConjugacyMap& h, double radius,
                                        const SamplingSpec& spec) {
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw DomainError("estimation radius must be positive and finite");
  }
  HolderEstimate out;
  if (h.dim_in() == 0 || spec.pair_count == 0) return out;

  const SlopeFit forward = fit_direction(h, false, radius, spec, 0x54u);
  const SlopeFit inverse = fit_direction(h, true, radius, spec, 0x55u);
  out.forward = forward.slope;
  out.inverse = inverse.slope;
  out.beta = std::min(forward.slope, inverse.slope);
  out.std_error = std::max(forward.std_error, inverse.std_error);
  out.constant = std::exp(forward.intercept);
  return out;
}

}  // namespace linflow
