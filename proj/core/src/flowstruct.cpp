// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "linflow/flowstruct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "linflow/errors.hpp"

namespace linflow {

GeneratorMatrix RealJordanBlock::matrix() const {
  if (z.imag() == 0.0) {
    GeneratorMatrix j(m);
    for (std::size_t i = 0; i < m; ++i) {
      j(i, i) = z.real();
      if (i + 1 < m) j(i, i + 1) = 1.0;
    }
    return j;
  }
  // Stacked planar form: a I + [[N, -b I], [b I, N]].
  const double a = z.real();
  const double b = z.imag();
  GeneratorMatrix j(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, i) = a;
    j(m + i, m + i) = a;
    j(i, m + i) = -b;
    j(m + i, i) = b;
    if (i + 1 < m) {
      j(i, i + 1) = 1.0;
      j(m + i, m + i + 1) = 1.0;
    }
  }
  return j;
}

std::size_t RealJordanDecomposition::dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += b.real_size();
  return d;
}

std::vector<std::size_t> RealJordanDecomposition::offsets() const {
  std::vector<std::size_t> off;
  off.reserve(blocks.size());
  std::size_t at = 0;
  for (const auto& b : blocks) {
    off.push_back(at);
    at += b.real_size();
  }
  return off;
}

GeneratorMatrix RealJordanDecomposition::block_diagonal() const {
  GeneratorMatrix j(dim());
  std::size_t at = 0;
  for (const auto& b : blocks) {
    const GeneratorMatrix jb = b.matrix();
    for (std::size_t i = 0; i < jb.dim(); ++i)
      for (std::size_t k = 0; k < jb.dim(); ++k)
        j(at + i, at + k) = jb(i, k);
    at += jb.dim();
  }
  return j;
}

namespace {

// ker M^n via renormalized powers. `scale` is the roundoff reference of M's
// construction: a power that collapses below it annihilates the whole space,
// so the kernel is everything; renormalizing the residue would promote noise
// to a full-rank matrix instead.
Eigen::MatrixXd power_kernel(const Eigen::MatrixXd& m, std::size_t n,
                             double rank_tol, double scale) {
  const Eigen::Index d = m.rows();
  if (!(m.norm() > rank_tol * scale)) return Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    p = p * m;
    const double nrm = p.norm();
    if (!(nrm > rank_tol * m.norm())) return Eigen::MatrixXd::Identity(d, d);
    p /= nrm;
  }
  return detail::kernel_of(p, rank_tol);
}

Eigen::MatrixXd quadratic_factor(const Eigen::MatrixXd& e, Cplx z) {
  const Eigen::Index d = e.rows();
  if (z.imag() == 0.0)
    return e - z.real() * Eigen::MatrixXd::Identity(d, d);
  return e * e - 2.0 * z.real() * e +
         std::norm(z) * Eigen::MatrixXd::Identity(d, d);
}

double quadratic_scale(const Eigen::MatrixXd& e, Cplx z) {
  const double s = e.norm() + std::abs(z);
  return z.imag() == 0.0 ? s : s * s;
}

}  // namespace

std::vector<Vec> generalized_kernel(const GeneratorMatrix& a, Cplx z,
                                    const ToleranceProfile& tol) {
  const std::size_t d = a.dim();
  if (d == 0) return {};
  const Eigen::MatrixXd e = detail::to_eigen(a);
  const Eigen::MatrixXd m = quadratic_factor(e, z);
  return detail::columns_of(
      power_kernel(m, d, tol.rank_tol, quadratic_scale(e, z)));
}

FlowDecomposition scu_split(const GeneratorMatrix& a,
                            const ToleranceProfile& tol) {
  const Spectrum spec = eigenvalues(a, tol);
  const Eigen::MatrixXd e = detail::to_eigen(a);
  const Eigen::Index d = e.rows();

  FlowDecomposition out;
  out.lambda = lyapunov_spectrum(a, tol);

  auto collect = [&](int sign) {
    std::vector<Eigen::MatrixXd> pieces;
    for (const auto& ent : spec.entries) {
      if (ent.z.imag() < 0.0) continue;  // the pair is one subspace
      const double re = ent.z.real();
      if ((sign < 0 && re >= 0.0) || (sign == 0 && re != 0.0) ||
          (sign > 0 && re <= 0.0))
        continue;
      pieces.push_back(power_kernel(quadratic_factor(e, ent.z),
                                    static_cast<std::size_t>(d), tol.rank_tol,
                                    quadratic_scale(e, ent.z)));
    }
    Eigen::Index cols = 0;
    for (const auto& p : pieces) cols += p.cols();
    Eigen::MatrixXd all(d, cols);
    Eigen::Index at = 0;
    for (const auto& p : pieces) {
      all.middleCols(at, p.cols()) = p;
      at += p.cols();
    }
    return detail::span_of(all, tol.rank_tol);
  };

  const Eigen::MatrixXd bs = collect(-1);
  const Eigen::MatrixXd bc = collect(0);
  const Eigen::MatrixXd bu = collect(+1);
  out.d_s = static_cast<std::size_t>(bs.cols());
  out.d_c = static_cast<std::size_t>(bc.cols());
  out.d_u = static_cast<std::size_t>(bu.cols());
  if (out.dim() != a.dim())
    throw NumericalFailure("invariant splitting of " + a.display_name() +
                           " does not fill the space; try a looser profile");
  out.basis_s = detail::columns_of(bs);
  out.basis_c = detail::columns_of(bc);
  out.basis_u = detail::columns_of(bu);
  // Restriction in an orthonormal basis of an invariant subspace.
  out.a_s = detail::from_eigen(bs.transpose() * e * bs);
  out.a_c = detail::from_eigen(bc.transpose() * e * bc);
  out.a_u = detail::from_eigen(bu.transpose() * e * bu);

  for (const auto& ent : spec.entries) {
    if (ent.z.real() != 0.0 || ent.z.imag() <= 0.0) continue;
    for (std::size_t k = 0; k < ent.multiplicity; ++k)
      out.central_frequencies.push_back(ent.z.imag());
  }
  std::sort(out.central_frequencies.begin(), out.central_frequencies.end());
  return out;
}

Vec lyapunov_spectrum(const GeneratorMatrix& a, const ToleranceProfile& tol) {
  const Spectrum spec = eigenvalues(a, tol);
  Vec lam;
  lam.reserve(a.dim());
  for (const auto& ent : spec.entries)
    for (std::size_t k = 0; k < ent.multiplicity; ++k)
      lam.push_back(ent.z.real());
  std::sort(lam.begin(), lam.end());
  return lam;
}

std::vector<Vec> lyapunov_space(const GeneratorMatrix& a, double s,
                                const ToleranceProfile& tol) {
  const Spectrum spec = eigenvalues(a, tol);
  const Eigen::MatrixXd e = detail::to_eigen(a);
  const Eigen::Index d = e.rows();
  std::vector<Eigen::MatrixXd> pieces;
  for (const auto& ent : spec.entries) {
    if (ent.z.imag() < 0.0) continue;
    if (ent.z.real() > s) continue;
    pieces.push_back(power_kernel(quadratic_factor(e, ent.z),
                                  static_cast<std::size_t>(d), tol.rank_tol,
                                  quadratic_scale(e, ent.z)));
  }
  Eigen::Index cols = 0;
  for (const auto& p : pieces) cols += p.cols();
  Eigen::MatrixXd all(d, cols);
  Eigen::Index at = 0;
  for (const auto& p : pieces) {
    all.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  return detail::columns_of(detail::span_of(all, tol.rank_tol));
}

GeneratorMatrix realify(const ComplexMatrix& m) {
  GeneratorMatrix r(2 * m.dim, GeneratorMatrix::Origin::RealifiedComplex);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) {
      const Cplx z = m.at(i, j);
      r(2 * i, 2 * j) = z.real();
      r(2 * i, 2 * j + 1) = -z.imag();
      r(2 * i + 1, 2 * j) = z.imag();
      r(2 * i + 1, 2 * j + 1) = z.real();
    }
  return r;
}

ComplexMatrix derealify(const GeneratorMatrix& r, double pattern_tol) {
  if (r.dim() % 2 != 0)
    throw DomainError(r.display_name() + " has odd dimension; not a realified operator");
  const std::size_t n = r.dim() / 2;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a0 = r(2 * i, 2 * j);
      const double a1 = r(2 * i + 1, 2 * j + 1);
      const double b0 = r(2 * i + 1, 2 * j);
      const double b1 = -r(2 * i, 2 * j + 1);
      if (std::abs(a0 - a1) > pattern_tol || std::abs(b0 - b1) > pattern_tol)
        throw DomainError(r.display_name() +
                          " does not have the realified block pattern");
      m.at(i, j) = Cplx(0.5 * (a0 + a1), 0.5 * (b0 + b1));
    }
  return m;
}

GeneratorMatrix complex_structure(std::size_t realified_dim) {
  if (realified_dim % 2 != 0)
    throw DomainError("complex structure needs an even dimension");
  GeneratorMatrix j(realified_dim);
  for (std::size_t k = 0; k + 1 < realified_dim; k += 2) {
    j(k, k + 1) = -1.0;
    j(k + 1, k) = 1.0;
  }
  return j;
}

GeneratorMatrix time_reverse(const GeneratorMatrix& a) {
  GeneratorMatrix r = a;
  r *= -1.0;
  if (!a.label().empty()) r.set_label("-(" + a.label() + ")");
  return r;
}

}  // namespace linflow
