// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "linflow/numcore.hpp"

namespace linflow::detail {

Eigen::MatrixXd to_eigen(const GeneratorMatrix& a);
GeneratorMatrix from_eigen(
    const Eigen::MatrixXd& m,
    GeneratorMatrix::Origin origin = GeneratorMatrix::Origin::RealInput);
Eigen::MatrixXcd to_eigen(const ComplexMatrix& m);

Eigen::VectorXd to_eigen(const Vec& x);
Vec from_eigen_vec(const Eigen::VectorXd& x);

std::vector<Vec> columns_of(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_columns(std::size_t dim, const std::vector<Vec>& cols);

std::size_t rank_of(const Eigen::MatrixXd& m, double rank_tol);
std::size_t rank_of(const Eigen::MatrixXcd& m, double rank_tol);

// Orthonormal kernel basis (columns), by SVD.
Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& m, double rank_tol);
Eigen::MatrixXcd kernel_of(const Eigen::MatrixXcd& m, double rank_tol);

// Orthonormal basis of the column span (columns), by SVD.
Eigen::MatrixXd span_of(const Eigen::MatrixXd& m, double rank_tol);

double cond_of(const Eigen::MatrixXd& m);

// L vec(Q) = vec(QA - BQ) in the column-major vec convention.
Eigen::MatrixXd intertwiner_operator(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index d);
// Kernel basis that switches to the divide and conquer SVD for the
// d^2 x d^2 operators.
Eigen::MatrixXd big_kernel(const Eigen::MatrixXd& m, double rank_tol);

// Raw eigenvalues by balancing, Hessenberg reduction, and shifted QR.
// No snapping; conjugate symmetry only up to roundoff. Throws
// NumericalFailure carrying `name` if the iteration stalls.
std::vector<Cplx> qr_eigenvalues(const Eigen::MatrixXd& a,
                                 const std::string& name);

// Closed-form eigenvalues of a complex 2x2 (or 1x1) matrix.
std::vector<Cplx> small_complex_eigenvalues(const Eigen::MatrixXcd& m);

inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace linflow::detail
