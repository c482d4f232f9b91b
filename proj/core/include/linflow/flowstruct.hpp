// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <vector>

#include "linflow/numcore.hpp"

namespace linflow {

// One real Jordan block. Real eigenvalues (Im z = 0) occupy m coordinates;
// complex pairs (Im z > 0) occupy 2m, the first m spanning the rotation
// planes with their partners in the last m.
struct RealJordanBlock {
  Cplx z;
  std::size_t m = 1;

  std::size_t real_size() const { return z.imag() > 0.0 ? 2 * m : m; }
  GeneratorMatrix matrix() const;
};

// A = basis * J * basis^{-1} with J the block diagonal of `blocks`, ordered
// by (Re z, Im z, m descending) so stable, central, and unstable coordinates
// come out contiguous.
struct RealJordanDecomposition {
  std::vector<RealJordanBlock> blocks;
  GeneratorMatrix basis;
  GeneratorMatrix basis_inv;
  double residual = 0.0;  // |A P - P J| relative to |A|

  std::size_t dim() const;
  GeneratorMatrix block_diagonal() const;
  std::vector<std::size_t> offsets() const;  // first coordinate of each block
};

// Invariant splitting into stable / central / unstable subspaces with the
// restricted generators and the Lyapunov exponents.
struct FlowDecomposition {
  std::size_t d_s = 0, d_c = 0, d_u = 0;
  std::vector<Vec> basis_s, basis_c, basis_u;  // orthonormal columns
  GeneratorMatrix a_s, a_c, a_u;               // restrictions in those bases
  Vec lambda;                                  // ascending, with multiplicity
  Vec central_frequencies;  // positive rotation rates of a_c, with multiplicity

  std::size_t dim() const { return d_s + d_c + d_u; }
  bool hyperbolic() const { return d_c == 0; }
};

// Rank-chain Jordan structure detection plus explicit chain bases. Throws
// NumericalFailure when multiplicities do not close or the chain basis is
// ill-conditioned; loosening the tolerance profile is the documented remedy
// for inputs near a structure change.
RealJordanDecomposition real_jordan(const GeneratorMatrix& a,
                                    const ToleranceProfile& tol = {});

// Orthonormal basis of the generalized eigenspace of z, computed through the
// real quadratic A^2 - 2 Re(z) A + |z|^2 I so complex pairs need no complex
// arithmetic. Empty when z is not an eigenvalue.
std::vector<Vec> generalized_kernel(const GeneratorMatrix& a, Cplx z,
                                    const ToleranceProfile& tol = {});

FlowDecomposition scu_split(const GeneratorMatrix& a,
                            const ToleranceProfile& tol = {});

// Real parts of the spectrum with generalized-eigenspace multiplicity,
// ascending.
Vec lyapunov_spectrum(const GeneratorMatrix& a, const ToleranceProfile& tol = {});

// Orthonormal basis of the sum of generalized eigenspaces with Re z <= s.
std::vector<Vec> lyapunov_space(const GeneratorMatrix& a, double s,
                                const ToleranceProfile& tol = {});

// Real picture of a complex operator: each entry a+ib becomes the 2x2 block
// [[a,-b],[b,a]]. The result carries Origin::RealifiedComplex.
GeneratorMatrix realify(const ComplexMatrix& m);

// Inverse of realify; DomainError when the matrix does not have the paired
// block pattern.
ComplexMatrix derealify(const GeneratorMatrix& r, double pattern_tol = 1e-9);

// The multiplication operator by i in realified coordinates.
GeneratorMatrix complex_structure(std::size_t realified_dim);

GeneratorMatrix time_reverse(const GeneratorMatrix& a);

}  // namespace linflow
