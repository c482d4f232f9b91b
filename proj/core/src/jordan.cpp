// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "internal.hpp"
#include "linflow/errors.hpp"
#include "linflow/flowstruct.hpp"

namespace linflow {

namespace {

template <typename MatT>
MatT span_cols(const MatT& m, double rank_tol) {
  if (m.cols() == 0) return MatT(m.rows(), 0);
  Eigen::JacobiSVD<MatT> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * top) ++r;
  }
  return svd.matrixU().leftCols(r);
}

template <typename MatT>
MatT kernel_cols(const MatT& m, double rank_tol) {
  Eigen::JacobiSVD<MatT> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? std::abs(sv(0)) : 0.0;
  Eigen::Index r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * top) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

// Jordan chains of M for the eigenvalue 0, as column lists ordered
// eigenvector first: [M^{n-1} t, ..., M t, t]. `mu` is the expected
// generalized kernel dimension. `scale` is the roundoff reference of M's
// construction: a power collapsing below it has full kernel, and
// renormalizing the residue would hide that.
template <typename MatT>
std::vector<std::vector<Eigen::Matrix<typename MatT::Scalar, Eigen::Dynamic, 1>>>
nilpotent_chains(const MatT& m, std::size_t mu, double rank_tol, double scale,
                 const std::string& name) {
  using VecT = Eigen::Matrix<typename MatT::Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index d = m.rows();

  // Kernel filtration of renormalized powers.
  std::vector<MatT> kernels;  // kernels[n-1] = orthonormal basis of ker M^n
  MatT p = MatT::Identity(d, d);
  std::size_t nmax = 0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(d) + 1; ++n) {
    p = p * m;
    const double nrm = p.norm();
    const double floor = rank_tol * (n == 1 ? scale : m.norm());
    if (!(nrm > floor)) {
      kernels.push_back(MatT::Identity(d, d));
      nmax = n;
      break;
    }
    p /= nrm;
    kernels.push_back(kernel_cols(p, rank_tol));
    const auto k = static_cast<std::size_t>(kernels.back().cols());
    const std::size_t prev =
        n >= 2 ? static_cast<std::size_t>(kernels[n - 2].cols()) : 0;
    if (k == prev) {
      nmax = n - 1;
      kernels.pop_back();
      break;
    }
    if (k >= mu) {
      nmax = n;
      break;
    }
  }
  auto kdim = [&](std::size_t n) -> std::size_t {
    if (n == 0) return 0;
    if (n > nmax) return static_cast<std::size_t>(kernels[nmax - 1].cols());
    return static_cast<std::size_t>(kernels[n - 1].cols());
  };
  if (nmax == 0 || kdim(nmax) != mu)
    throw NumericalFailure(
        "generalized kernel of " + name +
        " does not close at the clustered multiplicity; a looser tolerance "
        "profile may help");

  // Block counts from second differences of the filtration.
  std::vector<long long> count(nmax + 1, 0);
  long long total = 0;
  for (std::size_t n = 1; n <= nmax; ++n) {
    count[n] = 2LL * static_cast<long long>(kdim(n)) -
               static_cast<long long>(kdim(n - 1)) -
               static_cast<long long>(kdim(n + 1));
    if (count[n] < 0)
      throw NumericalFailure("rank filtration of " + name +
                             " is not monotone; a looser tolerance profile "
                             "may help");
    total += count[n] * static_cast<long long>(n);
  }
  if (total != static_cast<long long>(mu))
    throw NumericalFailure("block sizes of " + name +
                           " do not sum to the multiplicity");

  std::vector<std::vector<VecT>> chains;
  for (std::size_t n = nmax; n >= 1; --n) {
    if (count[n] > 0) {
      // Chain tops of height n: inside ker M^n, orthogonal to
      // ker M^{n-1} + M ker M^{n+1}.
      const MatT& kn = kernels[n - 1];
      const MatT& kup = n < nmax ? kernels[n] : kernels[nmax - 1];
      // Columns of M kup that vanish relative to |M| are noise, not
      // directions to avoid; keeping them would forbid genuine tops.
      MatT image = m * kup;
      const double mscale = m.norm();
      Eigen::Index keep = 0;
      for (Eigen::Index ci = 0; ci < image.cols(); ++ci) {
        const double nrm = image.col(ci).norm();
        if (nrm > rank_tol * mscale) image.col(keep++) = image.col(ci) / nrm;
      }
      MatT forbidden(d, (n >= 2 ? kernels[n - 2].cols() : 0) + keep);
      if (n >= 2)
        forbidden.leftCols(kernels[n - 2].cols()) = kernels[n - 2];
      forbidden.rightCols(keep) = image.leftCols(keep);
      const MatT qf = span_cols(forbidden, rank_tol);
      MatT cand = kn - qf * (qf.adjoint() * kn);

      Eigen::JacobiSVD<MatT> svd(cand, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      const double top = sv.size() > 0 ? sv(0) : 0.0;
      Eigen::Index avail = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * std::max(1.0, top)) ++avail;
      if (avail < count[n])
        throw NumericalFailure("could not separate " +
                               std::to_string(count[n]) + " chain top(s) of " +
                               name +
                               "; a looser tolerance profile may help");
      for (long long c = 0; c < count[n]; ++c) {
        VecT t = svd.matrixU().col(c);
        std::vector<VecT> chain(n);
        chain[n - 1] = t;
        for (std::size_t j = n - 1; j >= 1; --j)
          chain[j - 1] = m * chain[j];
        double mx = 0.0;
        for (const auto& v : chain) mx = std::max(mx, v.norm());
        for (auto& v : chain) v /= mx;
        chains.push_back(std::move(chain));
      }
    }
    if (n == 1) break;
  }
  return chains;
}

struct PendingBlock {
  RealJordanBlock block;
  std::vector<Eigen::VectorXd> columns;
};

}  // namespace

RealJordanDecomposition real_jordan(const GeneratorMatrix& a,
                                    const ToleranceProfile& tol) {
  const std::size_t d = a.dim();
  RealJordanDecomposition out;
  out.basis = GeneratorMatrix(d);
  out.basis_inv = GeneratorMatrix(d);
  if (d == 0) return out;

  const Spectrum spec = eigenvalues(a, tol);
  const Eigen::MatrixXd e = detail::to_eigen(a);
  const Eigen::MatrixXcd ec = e.cast<Cplx>();

  std::vector<PendingBlock> pending;
  for (const auto& ent : spec.entries) {
    if (ent.z.imag() < 0.0) continue;
    if (ent.z.imag() == 0.0) {
      const Eigen::MatrixXd m =
          e - ent.z.real() * Eigen::MatrixXd::Identity(e.rows(), e.cols());
      auto chains = nilpotent_chains(m, ent.multiplicity, tol.rank_tol,
                                     e.norm() + std::abs(ent.z),
                                     a.display_name());
      for (auto& chain : chains)
        pending.push_back({{ent.z, chain.size()}, std::move(chain)});
    } else {
      const Eigen::MatrixXcd m =
          ec - ent.z * Eigen::MatrixXcd::Identity(e.rows(), e.cols());
      auto chains = nilpotent_chains(m, ent.multiplicity, tol.rank_tol,
                                     e.norm() + std::abs(ent.z),
                                     a.display_name());
      for (auto& chain : chains) {
        // w_j = u_j + i v_j; real columns [v_1..v_m, u_1..u_m] give the
        // stacked planar block.
        const std::size_t mm = chain.size();
        std::vector<Eigen::VectorXd> cols(2 * mm);
        for (std::size_t j = 0; j < mm; ++j) {
          cols[j] = chain[j].imag();
          cols[mm + j] = chain[j].real();
        }
        pending.push_back({{ent.z, mm}, std::move(cols)});
      }
    }
  }

  std::stable_sort(pending.begin(), pending.end(),
                   [](const PendingBlock& x, const PendingBlock& y) {
                     if (x.block.z.real() != y.block.z.real())
                       return x.block.z.real() < y.block.z.real();
                     if (x.block.z.imag() != y.block.z.imag())
                       return x.block.z.imag() < y.block.z.imag();
                     return x.block.m > y.block.m;
                   });

  std::size_t total = 0;
  for (const auto& pb : pending) total += pb.block.real_size();
  if (total != d)
    throw NumericalFailure("chain construction for " + a.display_name() +
                           " does not fill the space; a looser tolerance "
                           "profile may help");

  Eigen::MatrixXd p(d, d);
  Eigen::Index at = 0;
  for (const auto& pb : pending) {
    out.blocks.push_back(pb.block);
    for (const auto& c : pb.columns) p.col(at++) = c;
  }

  if (detail::cond_of(p) > 1.0 / tol.rank_tol)
    throw NumericalFailure("chain basis of " + a.display_name() +
                           " is ill-conditioned; a looser tolerance profile "
                           "may help");
  const Eigen::MatrixXd pinv = p.inverse();
  out.basis = detail::from_eigen(p);
  out.basis_inv = detail::from_eigen(pinv);
  out.residual = (e * p - p * detail::to_eigen(out.block_diagonal())).norm() /
                 (1.0 + e.norm());
  return out;
}

}  // namespace linflow
