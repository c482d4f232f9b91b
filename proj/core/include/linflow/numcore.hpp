// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linflow/errors.hpp"

namespace linflow {

using Vec = std::vector<double>;
using Cplx = std::complex<double>;

// Default seed for every stochastic search and sampling routine.
inline constexpr std::uint64_t kDefaultSeed = 0x6C696E666C6F77ULL;

// Dimensions beyond this are rejected up front; the dense algorithms below
// are not meant for large systems.
inline constexpr std::size_t kDimSoftCap = 64;

// Dense real d x d generator of the linear flow t -> e^{tA}, row-major.
class GeneratorMatrix {
 public:
  // Generators that encode a complex operator on C^n as a real operator on
  // R^{2n} carry the RealifiedComplex tag so deciders can respect the
  // complex structure.
  enum class Origin { RealInput, RealifiedComplex };

  GeneratorMatrix() = default;
  explicit GeneratorMatrix(std::size_t dim, Origin origin = Origin::RealInput);
  GeneratorMatrix(std::size_t dim, Vec entries,
                  Origin origin = Origin::RealInput);

  static GeneratorMatrix identity(std::size_t dim);
  static GeneratorMatrix diagonal(const Vec& diag);

  std::size_t dim() const noexcept { return dim_; }
  Origin origin() const noexcept { return origin_; }
  void set_origin(Origin origin) noexcept { origin_ = origin; }

  // Display name used in error messages; empty means anonymous.
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  std::string display_name() const;

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * dim_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  const Vec& entries() const noexcept { return entries_; }

  Vec apply(const Vec& x) const;
  GeneratorMatrix transposed() const;
  double norm() const;  // Frobenius
  bool is_finite() const;

  GeneratorMatrix& operator+=(const GeneratorMatrix& rhs);
  GeneratorMatrix& operator-=(const GeneratorMatrix& rhs);
  GeneratorMatrix& operator*=(double s);

  friend GeneratorMatrix operator+(GeneratorMatrix a, const GeneratorMatrix& b) {
    a += b;
    return a;
  }
  friend GeneratorMatrix operator-(GeneratorMatrix a, const GeneratorMatrix& b) {
    a -= b;
    return a;
  }
  friend GeneratorMatrix operator*(double s, GeneratorMatrix a) {
    a *= s;
    return a;
  }
  friend GeneratorMatrix operator-(GeneratorMatrix a) {
    a *= -1.0;
    return a;
  }
  friend GeneratorMatrix operator*(const GeneratorMatrix& a,
                                   const GeneratorMatrix& b);
  friend bool operator==(const GeneratorMatrix& a, const GeneratorMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_ = 0;
  Origin origin_ = Origin::RealInput;
  std::string label_;
  Vec entries_;
};

// Dense square complex matrix, row-major; the parsed form of complex
// generator documents before realification.
struct ComplexMatrix {
  std::size_t dim = 0;
  std::vector<Cplx> entries;

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t d) : dim(d), entries(d * d) {}

  Cplx& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  const Cplx& at(std::size_t i, std::size_t j) const {
    return entries[i * dim + j];
  }
};

// Every numerical decision threshold in one place. Reports embed the profile
// under which their verdicts were computed.
struct ToleranceProfile {
  // Eigenvalues closer than eig_cluster_tol * (1 + |A|) are one cluster; real
  // and imaginary parts inside the same radius snap to zero.
  double eig_cluster_tol = 1e-8;
  // Singular values below rank_tol times the largest count as zero.
  double rank_tol = 1e-10;
  // Acceptable relative residual for factorizations and similarity witnesses.
  double residual_tol = 1e-8;
  // Slack when matching Lyapunov exponents or time rescalings.
  double alpha_match_tol = 1e-8;

  double eig_radius(const GeneratorMatrix& a) const {
    return eig_cluster_tol * (1.0 + a.norm());
  }
};

// Eigenvalues with algebraic multiplicity after cluster snapping. The entry
// list is closed under conjugation; both members of a pair appear.
struct Spectrum {
  struct Entry {
    Cplx z;
    std::size_t multiplicity = 0;
    bool conjugate_paired = false;
  };
  std::vector<Entry> entries;  // sorted by (Re, Im)

  std::size_t dim() const;
  std::vector<Cplx> values() const;  // expanded with multiplicity
};

// Balancing + Hessenberg reduction + shifted QR with cluster snapping.
// Throws NumericalFailure naming the matrix if the iteration stalls.
Spectrum eigenvalues(const GeneratorMatrix& a, const ToleranceProfile& tol = {});

// Count of singular values above rank_tol times the largest.
std::size_t numerical_rank(const GeneratorMatrix& a,
                           const ToleranceProfile& tol = {});

// Orthonormal basis of the numerical kernel; empty when a is injective.
std::vector<Vec> kernel_basis(const GeneratorMatrix& a,
                              const ToleranceProfile& tol = {});

// Orthonormal (Frobenius) basis of {Q : QA = BQ}.
std::vector<GeneratorMatrix> commutant_basis(const GeneratorMatrix& a,
                                             const GeneratorMatrix& b,
                                             const ToleranceProfile& tol = {});

// Invertible Q with QA = BQ, found by seeded random combinations of the
// intertwiner basis with a Jordan-structure fallback for the verdict.
// Returns nullopt when the operators are not similar; throws
// WitnessNotInvertible when the structures match but no sampled witness was
// invertible.
std::optional<GeneratorMatrix> find_similarity(const GeneratorMatrix& a,
                                               const GeneratorMatrix& b,
                                               const ToleranceProfile& tol = {},
                                               std::uint64_t seed = kDefaultSeed);

}  // namespace linflow
