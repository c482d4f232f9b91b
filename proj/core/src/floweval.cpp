// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include "linflow/floweval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace linflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_finite_exponential(const Eigen::MatrixXd& e) {
  if (!e.allFinite()) {
    throw std::range_error(
        "flow evaluation overflowed the double range; reduce |t|");
  }
}

// t^j / j! factors shared by every chain coordinate of one block.
std::vector<double> toeplitz_factors(std::size_t m, double t) {
  std::vector<double> f(m, 1.0);
  for (std::size_t j = 1; j < m; ++j) {
    f[j] = f[j - 1] * (t / static_cast<double>(j));
  }
  return f;
}

// e^{tJ} for one real Jordan block. Complex blocks are stacked: the rotation
// factor commutes with the nilpotent Toeplitz part, so every m x m quarter
// is the real-block exponential scaled by cos(bt) or sin(bt).
Eigen::MatrixXd block_exponential(const RealJordanBlock& b, double t) {
  const std::size_t m = b.m;
  const std::vector<double> f = toeplitz_factors(m, t);
  const double growth = std::exp(b.z.real() * t);
  if (b.z.imag() > 0.0) {
    const double c = std::cos(b.z.imag() * t);
    const double s = std::sin(b.z.imag() * t);
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const double w = growth * f[j - i];
        e(i, j) = c * w;
        e(i, m + j) = -s * w;
        e(m + i, j) = s * w;
        e(m + i, m + j) = c * w;
      }
    }
    return e;
  }
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      e(i, j) = growth * f[j - i];
    }
  }
  return e;
}

// Best rational p/q for v > 0 with q <= qmax, by continued fractions.
std::optional<PeriodResult::Ratio> rationalize(double v, double rel_tol,
                                               long long qmax) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = v;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    if (!(fl >= 0.0) || fl > 9.0e17) break;
    const long long ai = static_cast<long long>(fl);
    if (q1 > 0 && ai > (qmax - q0) / q1) break;
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (q1 > 0 &&
        std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) <=
            rel_tol * std::max(1.0, std::abs(v))) {
      return PeriodResult::Ratio{p1, q1};
    }
    const double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

FlowOperator::FlowOperator(GeneratorMatrix a, const ToleranceProfile& tol)
    : a_(std::move(a)), tol_(tol) {
  try {
    RealJordanDecomposition jd = real_jordan(a_, tol_);
    if (jd.residual <= tol_.residual_tol) {
      jordan_ = std::move(jd);
    }
  } catch (const NumericalFailure&) {
    // The series fallback keeps the evaluator usable near structure changes.
  }
}

GeneratorMatrix FlowOperator::at(double t) const {
  if (!std::isfinite(t)) {
    throw DomainError("flow time must be finite");
  }
  if (!jordan_) {
    return exp_oracle(a_, t);
  }
  const std::size_t d = a_.dim();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
  std::size_t off = 0;
  for (const RealJordanBlock& b : jordan_->blocks) {
    const Eigen::MatrixXd eb = block_exponential(b, t);
    e.block(off, off, eb.rows(), eb.cols()) = eb;
    off += b.real_size();
  }
  require_finite_exponential(e);
  const Eigen::MatrixXd full = detail::to_eigen(jordan_->basis) * e *
                               detail::to_eigen(jordan_->basis_inv);
  require_finite_exponential(full);
  return detail::from_eigen(full, a_.origin());
}

Vec FlowOperator::apply(double t, const Vec& x) const { return at(t).apply(x); }

Vec flow_map(const GeneratorMatrix& a, double t, const Vec& x,
             const ToleranceProfile& tol) {
  return FlowOperator(a, tol).apply(t, x);
}

GeneratorMatrix exp_oracle(const GeneratorMatrix& a, double t) {
  if (!a.is_finite()) {
    throw DomainError(a.display_name() + " has non-finite entries");
  }
  if (!std::isfinite(t)) {
    throw DomainError("flow time must be finite");
  }
  const std::size_t d = a.dim();
  if (d == 0) {
    return GeneratorMatrix(0, a.origin());
  }
  Eigen::MatrixXd x = t * detail::to_eigen(a);
  const double nrm = x.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(nrm)) {
    throw std::range_error(
        "flow evaluation overflowed the double range; reduce |t|");
  }
  int squarings = 0;
  if (nrm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  }
  x /= std::ldexp(1.0, squarings);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
  for (int k = 1; k <= 32; ++k) {
    term = (term * x) / static_cast<double>(k);
    acc += term;
    if (term.norm() <= 1e-18 * acc.norm()) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) {
    acc = acc * acc;
    if (!acc.allFinite()) {
      throw std::range_error(
          "flow evaluation overflowed the double range; reduce |t|");
    }
  }
  require_finite_exponential(acc);
  return detail::from_eigen(acc, a.origin());
}

std::vector<Vec> fixed_space(const GeneratorMatrix& a,
                             const ToleranceProfile& tol) {
  return kernel_basis(a, tol);
}

std::vector<Vec> periodic_subspace(const GeneratorMatrix& a, double T,
                                   const ToleranceProfile& tol) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("period T must be positive and finite");
  }
  const RealJordanDecomposition jd = real_jordan(a, tol);
  std::vector<Vec> cols = kernel_basis(a, tol);
  const Eigen::MatrixXd p = detail::to_eigen(jd.basis);
  std::size_t off = 0;
  for (const RealJordanBlock& b : jd.blocks) {
    if (b.z.imag() > 0.0 && b.z.real() == 0.0 && b.m == 1) {
      const double k = b.z.imag() * T / kTwoPi;
      const double kr = std::round(k);
      if (kr >= 1.0 &&
          std::abs(k - kr) <= tol.alpha_match_tol * std::max(1.0, k)) {
        cols.push_back(detail::from_eigen_vec(p.col(off)));
        cols.push_back(detail::from_eigen_vec(p.col(off + 1)));
      }
    }
    off += b.real_size();
  }
  if (cols.empty()) {
    return {};
  }
  const Eigen::MatrixXd m = detail::matrix_from_columns(a.dim(), cols);
  return detail::columns_of(detail::span_of(m, tol.rank_tol));
}

PeriodResult minimal_period(const GeneratorMatrix& a, const Vec& x,
                            const ToleranceProfile& tol) {
  if (x.size() != a.dim()) {
    throw DimensionMismatch("point of dimension " + std::to_string(x.size()) +
                            " does not match " + a.display_name());
  }
  const RealJordanDecomposition jd = real_jordan(a, tol);
  const Eigen::VectorXd c = detail::to_eigen(jd.basis_inv) * detail::to_eigen(x);
  const double thr = tol.rank_tol * detail::to_eigen(x).norm();

  // Chains store the eigenvector first, so only the leading coordinate of a
  // zero block and the leading pair of a rotation block stay bounded.
  bool drifts = false;
  std::vector<double> rates;
  std::size_t off = 0;
  for (const RealJordanBlock& b : jd.blocks) {
    if (b.z.imag() > 0.0) {
      for (std::size_t j = 0; j < b.m; ++j) {
        const double amp = std::hypot(c(static_cast<Eigen::Index>(off + j)),
                                      c(static_cast<Eigen::Index>(off + b.m + j)));
        if (amp <= thr) {
          continue;
        }
        if (b.z.real() != 0.0 || j > 0) {
          drifts = true;
        } else {
          rates.push_back(b.z.imag());
        }
      }
    } else {
      for (std::size_t j = 0; j < b.m; ++j) {
        if (std::abs(c(static_cast<Eigen::Index>(off + j))) <= thr) {
          continue;
        }
        if (b.z.real() != 0.0 || j > 0) {
          drifts = true;
        }
      }
    }
    off += b.real_size();
  }

  std::sort(rates.begin(), rates.end());
  Vec unique_rates;
  for (double r : rates) {
    if (unique_rates.empty() ||
        std::abs(r - unique_rates.back()) >
            tol.alpha_match_tol * std::max(1.0, std::abs(r))) {
      unique_rates.push_back(r);
    }
  }

  PeriodResult out;
  out.frequencies = unique_rates;
  if (drifts) {
    out.kind = PeriodResult::Kind::Infinite;
    return out;
  }
  if (unique_rates.empty()) {
    out.kind = PeriodResult::Kind::Zero;
    return out;
  }

  // b_j T in 2 pi Z for all excited rates forces T = 2 pi lcm(q_j) / b_1
  // once b_j / b_1 = p_j / q_j in lowest terms.
  constexpr long long kDenominatorCap = 1000000;
  long long common = 1;
  std::vector<PeriodResult::Ratio> ratios;
  for (double r : unique_rates) {
    const auto pq =
        rationalize(r / unique_rates.front(), tol.alpha_match_tol, kDenominatorCap);
    if (!pq) {
      out.kind = PeriodResult::Kind::Infinite;
      return out;
    }
    ratios.push_back(*pq);
    common = std::lcm(common, pq->q);
    if (common > 1000000000000000LL) {
      out.kind = PeriodResult::Kind::Infinite;
      return out;
    }
  }
  // The period T = 2 pi lcm / b_1 closes phase j only if the ratio error,
  // scaled by lcm, still vanishes; a convergent that merely shadows an
  // irrational ratio fails here.
  for (std::size_t i = 0; i < unique_rates.size(); ++i) {
    const double misfit =
        std::abs(unique_rates[i] / unique_rates.front() -
                 static_cast<double>(ratios[i].p) /
                     static_cast<double>(ratios[i].q)) *
        static_cast<double>(common);
    if (misfit > tol.alpha_match_tol) {
      out.kind = PeriodResult::Kind::Infinite;
      return out;
    }
  }
  out.kind = PeriodResult::Kind::Finite;
  out.value = kTwoPi * static_cast<double>(common) / unique_rates.front();
  out.commensurability = std::move(ratios);
  return out;
}

std::vector<Cplx> imaginary_spectrum(const GeneratorMatrix& a,
                                     const ToleranceProfile& tol) {
  std::vector<Cplx> out;
  for (const Spectrum::Entry& e : eigenvalues(a, tol).entries) {
    if (e.z.real() == 0.0) {
      out.insert(out.end(), e.multiplicity, e.z);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Cplx& u, const Cplx& v) { return u.imag() < v.imag(); });
  return out;
}

std::string OrbitSample::to_csv() const {
  const std::size_t d = states.empty() ? 0 : states.front().size();
  std::ostringstream os;
  os << "t";
  for (std::size_t j = 1; j <= d; ++j) {
    os << ",x" << j;
  }
  os << "\n";
  char buf[64];
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", times[i]);
    os << buf;
    for (double v : states[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      os << ',' << buf;
    }
    os << "\n";
  }
  return os.str();
}

OrbitSample sample_orbit(const GeneratorMatrix& a, const Vec& x0,
                         const Vec& times, const ToleranceProfile& tol) {
  const FlowOperator flow(a, tol);
  Vec ts = times;
  std::sort(ts.begin(), ts.end());
  if (std::find(ts.begin(), ts.end(), 0.0) == ts.end()) {
    ts.insert(std::lower_bound(ts.begin(), ts.end(), 0.0), 0.0);
  }
  OrbitSample sample;
  sample.times = std::move(ts);
  sample.states.reserve(sample.times.size());
  for (double t : sample.times) {
    sample.states.push_back(flow.apply(t, x0));
  }
  return sample;
}

}  // namespace linflow
