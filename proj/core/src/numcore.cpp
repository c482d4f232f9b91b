// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "linflow/numcore.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "internal.hpp"
#include "linflow/errors.hpp"

namespace linflow {

namespace detail {

Eigen::MatrixXd to_eigen(const GeneratorMatrix& a) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

GeneratorMatrix from_eigen(const Eigen::MatrixXd& m,
                           GeneratorMatrix::Origin origin) {
  GeneratorMatrix a(static_cast<std::size_t>(m.rows()), origin);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return a;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const auto d = static_cast<Eigen::Index>(m.dim);
  Eigen::MatrixXcd e(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      e(i, j) = m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return e;
}

Eigen::VectorXd to_eigen(const Vec& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = x[static_cast<std::size_t>(i)];
  return v;
}

Vec from_eigen_vec(const Eigen::VectorXd& x) {
  Vec v(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    v[static_cast<std::size_t>(i)] = x(i);
  return v;
}

std::vector<Vec> columns_of(const Eigen::MatrixXd& m) {
  std::vector<Vec> cols;
  cols.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    cols.push_back(from_eigen_vec(m.col(j)));
  return cols;
}

Eigen::MatrixXd matrix_from_columns(std::size_t dim,
                                    const std::vector<Vec>& cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dim),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != dim)
      throw DimensionMismatch("column length does not match the space");
    m.col(static_cast<Eigen::Index>(j)) = to_eigen(cols[j]);
  }
  return m;
}

namespace {

template <typename Matrix>
std::size_t rank_impl(const Matrix& m, double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++r;
  return r;
}

template <typename Matrix>
Matrix kernel_impl(const Matrix& m, double rank_tol) {
  if (m.cols() == 0) return Matrix(m.cols(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? std::abs(sv(0)) : 0.0;
  Eigen::Index r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * top) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

}  // namespace

std::size_t rank_of(const Eigen::MatrixXd& m, double rank_tol) {
  return rank_impl(m, rank_tol);
}
std::size_t rank_of(const Eigen::MatrixXcd& m, double rank_tol) {
  return rank_impl(m, rank_tol);
}
Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& m, double rank_tol) {
  return kernel_impl(m, rank_tol);
}
Eigen::MatrixXcd kernel_of(const Eigen::MatrixXcd& m, double rank_tol) {
  return kernel_impl(m, rank_tol);
}

Eigen::MatrixXd span_of(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * top) ++r;
  }
  return svd.matrixU().leftCols(r);
}

double cond_of(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double lo = sv(sv.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / lo;
}

}  // namespace detail

GeneratorMatrix::GeneratorMatrix(std::size_t dim, Origin origin)
    : dim_(dim), origin_(origin), entries_(dim * dim, 0.0) {}

GeneratorMatrix::GeneratorMatrix(std::size_t dim, Vec entries, Origin origin)
    : dim_(dim), origin_(origin), entries_(std::move(entries)) {
  if (entries_.size() != dim * dim)
    throw DimensionMismatch("entry count does not match a square matrix");
}

GeneratorMatrix GeneratorMatrix::identity(std::size_t dim) {
  GeneratorMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) a(i, i) = 1.0;
  return a;
}

GeneratorMatrix GeneratorMatrix::diagonal(const Vec& diag) {
  GeneratorMatrix a(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) a(i, i) = diag[i];
  return a;
}

std::string GeneratorMatrix::display_name() const {
  if (!label_.empty()) return label_;
  return "unnamed " + std::to_string(dim_) + "x" + std::to_string(dim_) +
         " matrix";
}

Vec GeneratorMatrix::apply(const Vec& x) const {
  if (x.size() != dim_)
    throw DimensionMismatch("vector length does not match " + display_name());
  Vec y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += entries_[i * dim_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

GeneratorMatrix GeneratorMatrix::transposed() const {
  GeneratorMatrix t(dim_, origin_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double GeneratorMatrix::norm() const {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return std::sqrt(s);
}

bool GeneratorMatrix::is_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double v) { return std::isfinite(v); });
}

GeneratorMatrix& GeneratorMatrix::operator+=(const GeneratorMatrix& rhs) {
  if (rhs.dim_ != dim_) throw DimensionMismatch("matrix sizes differ in +");
  for (std::size_t k = 0; k < entries_.size(); ++k)
    entries_[k] += rhs.entries_[k];
  return *this;
}

GeneratorMatrix& GeneratorMatrix::operator-=(const GeneratorMatrix& rhs) {
  if (rhs.dim_ != dim_) throw DimensionMismatch("matrix sizes differ in -");
  for (std::size_t k = 0; k < entries_.size(); ++k)
    entries_[k] -= rhs.entries_[k];
  return *this;
}

GeneratorMatrix& GeneratorMatrix::operator*=(double s) {
  for (double& v : entries_) v *= s;
  return *this;
}

GeneratorMatrix operator*(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix sizes differ in *");
  const std::size_t d = a.dim();
  GeneratorMatrix c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::size_t Spectrum::dim() const {
  std::size_t d = 0;
  for (const auto& e : entries) d += e.multiplicity;
  return d;
}

std::vector<Cplx> Spectrum::values() const {
  std::vector<Cplx> out;
  out.reserve(dim());
  for (const auto& e : entries)
    for (std::size_t k = 0; k < e.multiplicity; ++k) out.push_back(e.z);
  return out;
}

namespace {

void check_usable(const GeneratorMatrix& a) {
  if (a.dim() > kDimSoftCap)
    throw UnsupportedDimension(a.display_name() + " exceeds the dimension cap " +
                               std::to_string(kDimSoftCap));
  if (!a.is_finite())
    throw DomainError(a.display_name() + " has non-finite entries");
}

}  // namespace

Spectrum eigenvalues(const GeneratorMatrix& a, const ToleranceProfile& tol) {
  check_usable(a);
  const std::size_t d = a.dim();
  Spectrum spec;
  if (d == 0) return spec;

  const std::vector<Cplx> raw =
      detail::qr_eigenvalues(detail::to_eigen(a), a.display_name());
  const double radius = tol.eig_radius(a);

  // Cluster on (Re, |Im|) so roundoff cannot split a conjugate pair across
  // clusters, then decide real versus paired from the cluster mean.
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double dre = raw[i].real() - raw[j].real();
      const double dim_ = std::abs(raw[i].imag()) - std::abs(raw[j].imag());
      if (std::hypot(dre, dim_) <= radius) parent[find(i)] = find(j);
    }

  std::vector<std::vector<std::size_t>> groups(d);
  for (std::size_t i = 0; i < d; ++i) groups[find(i)].push_back(i);

  for (const auto& g : groups) {
    if (g.empty()) continue;
    double re = 0.0, im = 0.0;
    for (std::size_t i : g) {
      re += raw[i].real();
      im += std::abs(raw[i].imag());
    }
    re /= static_cast<double>(g.size());
    im /= static_cast<double>(g.size());
    if (std::abs(re) <= radius) re = 0.0;
    if (im <= radius) {
      spec.entries.push_back({Cplx(re, 0.0), g.size(), false});
    } else {
      if (g.size() % 2 != 0)
        throw NumericalFailure("inconsistent conjugate pairing in spectrum of " +
                               a.display_name());
      spec.entries.push_back({Cplx(re, im), g.size() / 2, true});
      spec.entries.push_back({Cplx(re, -im), g.size() / 2, true});
    }
  }

  std::sort(spec.entries.begin(), spec.entries.end(),
            [](const Spectrum::Entry& x, const Spectrum::Entry& y) {
              if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
              return x.z.imag() < y.z.imag();
            });
  return spec;
}

std::size_t numerical_rank(const GeneratorMatrix& a,
                           const ToleranceProfile& tol) {
  check_usable(a);
  return detail::rank_of(detail::to_eigen(a), tol.rank_tol);
}

std::vector<Vec> kernel_basis(const GeneratorMatrix& a,
                              const ToleranceProfile& tol) {
  check_usable(a);
  return detail::columns_of(detail::kernel_of(detail::to_eigen(a), tol.rank_tol));
}

namespace detail {

// vec is column-major: L vec(Q) = vec(QA - BQ).
Eigen::MatrixXd intertwiner_operator(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b) {
  const Eigen::Index d = a.rows();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::Index row = j * d + i;
      for (Eigen::Index k = 0; k < d; ++k) {
        L(row, k * d + i) += a(k, j);
        L(row, j * d + k) -= b(i, k);
      }
    }
  return L;
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index d) {
  Eigen::MatrixXd q(d, d);
  for (Eigen::Index j = 0; j < d; ++j) q.col(j) = v.segment(j * d, d);
  return q;
}

// Large kernels come from the d^2 x d^2 operator; use the divide and conquer
// SVD beyond small sizes.
Eigen::MatrixXd big_kernel(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.rows() <= 256) return kernel_of(m, rank_tol);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * top) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

}  // namespace detail

namespace {

using detail::big_kernel;
using detail::intertwiner_operator;
using detail::unvec;

// Kernel dimension chain of powers, each power renormalized so the rank
// threshold stays scale free. Stops when the chain stabilizes. `scale` is
// the roundoff reference of m's construction: a power collapsing below it
// has full kernel, and renormalizing the residue would hide that.
std::vector<std::size_t> kernel_chain(const Eigen::MatrixXd& m, double rank_tol,
                                      std::size_t cap, double scale) {
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> dims;
  if (!(m.norm() > rank_tol * scale)) {
    dims.push_back(d);
    return dims;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m.rows(), m.rows());
  std::size_t prev = 0;
  for (std::size_t n = 1; n <= cap; ++n) {
    p = p * m;
    const double nrm = p.norm();
    if (!(nrm > rank_tol * m.norm())) {
      dims.push_back(d);
      break;
    }
    p /= nrm;
    const std::size_t k = d - detail::rank_of(p, rank_tol);
    dims.push_back(k);
    if (k == prev) break;
    prev = k;
  }
  return dims;
}

// Jordan block size multiset of one snapped eigenvalue, from kernel chains.
// Real eigenvalues use A - aI, pairs use the real quadratic.
std::vector<std::size_t> structure_at(const Eigen::MatrixXd& e, Cplx z,
                                      std::size_t mult, double rank_tol) {
  const Eigen::Index d = e.rows();
  Eigen::MatrixXd m;
  std::size_t scale = 1;
  const double s = e.norm() + std::abs(z);
  double ref = s;
  if (z.imag() == 0.0) {
    m = e - z.real() * Eigen::MatrixXd::Identity(d, d);
  } else {
    m = e * e - 2.0 * z.real() * e +
        std::norm(z) * Eigen::MatrixXd::Identity(d, d);
    scale = 2;
    ref = s * s;
  }
  auto chain = kernel_chain(m, rank_tol, static_cast<std::size_t>(d), ref);
  // counts of blocks with size exactly n from second differences
  std::vector<std::size_t> sizes;
  chain.insert(chain.begin(), 0);
  chain.push_back(chain.back());
  for (std::size_t n = 1; n + 1 < chain.size(); ++n) {
    const long long c = 2LL * static_cast<long long>(chain[n]) -
                        static_cast<long long>(chain[n - 1]) -
                        static_cast<long long>(chain[n + 1]);
    for (long long k = 0; k < c / static_cast<long long>(scale); ++k)
      sizes.push_back(n);
  }
  std::sort(sizes.begin(), sizes.end());
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  if (total != mult) return {};  // caller treats as structure mismatch
  return sizes;
}

}  // namespace

std::vector<GeneratorMatrix> commutant_basis(const GeneratorMatrix& a,
                                             const GeneratorMatrix& b,
                                             const ToleranceProfile& tol) {
  check_usable(a);
  check_usable(b);
  if (a.dim() != b.dim())
    throw DimensionMismatch("intertwiners need equal dimensions: " +
                            a.display_name() + " vs " + b.display_name());
  const auto d = static_cast<Eigen::Index>(a.dim());
  if (d == 0) return {};
  const Eigen::MatrixXd L =
      intertwiner_operator(detail::to_eigen(a), detail::to_eigen(b));
  // A relation operator at roundoff scale constrains nothing: every matrix
  // intertwines. Thresholding against its own top singular value would turn
  // the noise into constraints.
  const double scale =
      detail::to_eigen(a).norm() + detail::to_eigen(b).norm();
  const Eigen::MatrixXd K = !(L.norm() > tol.rank_tol * scale)
                                ? Eigen::MatrixXd::Identity(d * d, d * d)
                                : big_kernel(L, tol.rank_tol);
  std::vector<GeneratorMatrix> out;
  out.reserve(static_cast<std::size_t>(K.cols()));
  for (Eigen::Index j = 0; j < K.cols(); ++j)
    out.push_back(detail::from_eigen(unvec(K.col(j), d)));
  return out;
}

std::optional<GeneratorMatrix> find_similarity(const GeneratorMatrix& a,
                                               const GeneratorMatrix& b,
                                               const ToleranceProfile& tol,
                                               std::uint64_t seed) {
  check_usable(a);
  check_usable(b);
  if (a.dim() != b.dim())
    throw DimensionMismatch("similarity needs equal dimensions: " +
                            a.display_name() + " vs " + b.display_name());
  const std::size_t d = a.dim();
  if (d == 0) return GeneratorMatrix(0);

  const auto basis = commutant_basis(a, b, tol);
  if (basis.empty()) return std::nullopt;

  const Eigen::MatrixXd ea = detail::to_eigen(a);
  const Eigen::MatrixXd eb = detail::to_eigen(b);
  const double scale = ea.norm() + eb.norm();

  auto engine = detail::seeded_engine(seed, 0x51u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int draw = 0; draw < 32; ++draw) {
    GeneratorMatrix q(d);
    for (const auto& k : basis) {
      const double c = gauss(engine);
      GeneratorMatrix term = k;
      term *= c;
      q += term;
    }
    const double nq = q.norm();
    if (nq == 0.0) continue;
    q *= 1.0 / nq;
    Eigen::MatrixXd eq = detail::to_eigen(q);
    if (std::abs(eq.determinant()) <= tol.rank_tol) continue;
    if ((eq * ea - eb * eq).norm() > tol.residual_tol * (1.0 + scale)) continue;
    return q;
  }

  // Every sampled combination was singular; settle the verdict from the
  // block structure.
  const Spectrum sa = eigenvalues(a, tol);
  const Spectrum sb = eigenvalues(b, tol);
  const double radius = 2.0 * std::max(tol.eig_radius(a), tol.eig_radius(b));
  if (sa.entries.size() != sb.entries.size()) return std::nullopt;
  for (std::size_t i = 0; i < sa.entries.size(); ++i) {
    const auto& x = sa.entries[i];
    const auto& y = sb.entries[i];
    if (x.multiplicity != y.multiplicity || std::abs(x.z - y.z) > radius)
      return std::nullopt;
  }
  for (std::size_t i = 0; i < sa.entries.size(); ++i) {
    const auto& e = sa.entries[i];
    if (e.z.imag() < 0.0) continue;
    const std::size_t mult =
        e.conjugate_paired ? 2 * e.multiplicity : e.multiplicity;
    const auto sx = structure_at(ea, e.z, mult, tol.rank_tol);
    const auto sy = structure_at(eb, sb.entries[i].z, mult, tol.rank_tol);
    if (sx.empty() || sy.empty() || sx != sy) return std::nullopt;
  }
  throw WitnessNotInvertible(
      "similar structure but no numerically invertible witness found for " +
      a.display_name() + " ~ " + b.display_name());
}

}  // namespace linflow
