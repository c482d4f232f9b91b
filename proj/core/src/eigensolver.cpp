// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT
//
// Dense eigenvalue extraction: Osborne balancing, Householder reduction to
// Hessenberg form, then single-shift QR in complex arithmetic with Wilkinson
// shifts. Complex arithmetic keeps the bookkeeping simple at the dimensions
// this library targets.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "internal.hpp"
#include "linflow/errors.hpp"

namespace linflow::detail {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

// Diagonal similarity scaling by powers of two; improves the subdiagonal
// deflation thresholds without perturbing eigenvalues.
void balance(MatrixXd& a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  int sweeps = 0;
  while (!converged && sweeps++ < 40) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(a(i, j));
        c += std::abs(a(j, i));
      }
      if (r == 0.0 || c == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (f != 1.0 && c + r < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

void hessenberg(MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    Eigen::VectorXcd x = h.col(k).segment(k + 1, n - k - 1);
    const double nx = x.norm();
    if (nx == 0.0) continue;
    Eigen::VectorXcd v = x;
    const Cplx x0 = x(0);
    const Cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Cplx(1.0, 0.0);
    v(0) += phase * nx;
    const double nv = v.norm();
    if (nv == 0.0) continue;
    v /= nv;
    h.middleRows(k + 1, n - k - 1) -=
        2.0 * v * (v.adjoint() * h.middleRows(k + 1, n - k - 1));
    h.middleCols(k + 1, n - k - 1) -=
        2.0 * (h.middleCols(k + 1, n - k - 1) * v) * v.adjoint();
    for (Eigen::Index i = k + 2; i < n; ++i) h(i, k) = Cplx(0.0, 0.0);
  }
}

Cplx wilkinson_shift(const MatrixXcd& h, Eigen::Index hi) {
  const Cplx a = h(hi - 1, hi - 1);
  const Cplx b = h(hi - 1, hi);
  const Cplx c = h(hi, hi - 1);
  const Cplx d = h(hi, hi);
  const Cplx tr2 = (a + d) / 2.0;
  const Cplx det = a * d - b * c;
  const Cplx disc = std::sqrt(tr2 * tr2 - det);
  const Cplx r1 = tr2 + disc;
  const Cplx r2 = tr2 - disc;
  return std::abs(r1 - d) <= std::abs(r2 - d) ? r1 : r2;
}

}  // namespace

std::vector<Cplx> small_complex_eigenvalues(const MatrixXcd& m) {
  if (m.rows() == 1) return {m(0, 0)};
  const Cplx tr2 = (m(0, 0) + m(1, 1)) / 2.0;
  const Cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Cplx disc = std::sqrt(tr2 * tr2 - det);
  return {tr2 + disc, tr2 - disc};
}

std::vector<Cplx> qr_eigenvalues(const MatrixXd& a, const std::string& name) {
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {Cplx(a(0, 0), 0.0)};
  if (n == 2) {
    // Closed form in real arithmetic; exact for double roots.
    const double tr2 = (a(0, 0) + a(1, 1)) / 2.0;
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr2 * tr2 - det;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      return {Cplx(tr2 - s, 0.0), Cplx(tr2 + s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {Cplx(tr2, -s), Cplx(tr2, s)};
  }

  MatrixXd bal = a;
  balance(bal);
  MatrixXcd h = bal.cast<Cplx>();
  hessenberg(h);

  std::vector<Cplx> out;
  out.reserve(n);
  const double eps = 1e-15;
  Eigen::Index hi = n - 1;
  long iter_budget = 60 * static_cast<long>(n);
  int since_deflation = 0;

  while (hi >= 0) {
    // Zero negligible subdiagonals, then pop converged 1x1 tails.
    for (Eigen::Index i = 1; i <= hi; ++i) {
      const double bound = eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (std::abs(h(i, i - 1)) <= bound) h(i, i - 1) = Cplx(0.0, 0.0);
    }
    if (hi == 0 || h(hi, hi - 1) == Cplx(0.0, 0.0)) {
      out.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (--iter_budget < 0) {
      throw NumericalFailure("eigenvalue iteration failed to converge for " +
                             name);
    }

    Eigen::Index lo = hi;
    while (lo > 0 && h(lo, lo - 1) != Cplx(0.0, 0.0)) --lo;

    Cplx mu = wilkinson_shift(h, hi);
    if (++since_deflation % 16 == 0) {
      // Occasional ad hoc shift to break symmetric stalls.
      mu = h(hi, hi) + Cplx(1.5 * std::abs(h(hi, hi - 1)), 0.0);
    }

    // One explicit shifted QR sweep on the active window via Givens
    // rotations: H <- G* (H - mu I) applied left, then right, then undo the
    // shift.
    const Eigen::Index w = hi - lo + 1;
    MatrixXcd block = h.block(lo, lo, w, w);
    for (Eigen::Index i = 0; i < w; ++i) block(i, i) -= mu;
    std::vector<Eigen::JacobiRotation<Cplx>> rots(static_cast<std::size_t>(w) - 1);
    for (Eigen::Index k = 0; k + 1 < w; ++k) {
      Eigen::JacobiRotation<Cplx> g;
      g.makeGivens(block(k, k), block(k + 1, k));
      block.applyOnTheLeft(k, k + 1, g.adjoint());
      rots[static_cast<std::size_t>(k)] = g;
    }
    for (Eigen::Index k = 0; k + 1 < w; ++k) {
      block.applyOnTheRight(k, k + 1, rots[static_cast<std::size_t>(k)]);
    }
    for (Eigen::Index i = 0; i < w; ++i) block(i, i) += mu;
    h.block(lo, lo, w, w) = block;
  }

  return out;
}

}  // namespace linflow::detail
