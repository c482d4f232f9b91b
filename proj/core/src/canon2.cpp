// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "internal.hpp"
#include "linflow/equivalence.hpp"

namespace linflow {

namespace {

struct Canon {
  std::string label;
  std::vector<double> params;
  double alpha = 1.0;
};

// The some-Hoelder classes coincide with the topological ones, so four lists
// cover the five catalog levels.
Level list_of(Level level) {
  return level == Level::SomeHolder ? Level::Topological : level;
}

double snap_unit(double v, double tol) {
  if (std::abs(v) <= tol) return 0.0;
  if (std::abs(v - 1.0) <= tol) return 1.0;
  if (std::abs(v + 1.0) <= tol) return -1.0;
  return v;
}

Canon real_d1(double lambda) {
  if (lambda == 0.0) return {"0", {}, 1.0};
  return {"1", {}, lambda};
}

Canon real_d2(const GeneratorMatrix& g, Level list,
              const ToleranceProfile& tol) {
  const Spectrum sp = eigenvalues(g, tol);

  for (const Spectrum::Entry& e : sp.entries) {
    if (e.z.imag() <= 0.0) continue;
    const double x = e.z.real();
    const double b = e.z.imag();
    if (x == 0.0) return {"J1(i)", {}, b};
    switch (list) {
      case Level::Smooth:
        return {"J1(1+ib)", {b / std::abs(x)}, x};
      case Level::Lipschitz:
      case Level::AllHolder:
        return {"diag(a,1)", {1.0}, x};
      default:
        return {"I2", {}, x};
    }
  }

  Vec reals;
  for (const Spectrum::Entry& e : sp.entries) {
    reals.insert(reals.end(), e.multiplicity, e.z.real());
  }
  const double l1 = reals[0];
  const double l2 = reals[1];

  if (l1 == 0.0 && l2 == 0.0) {
    return {numerical_rank(g, tol) == 0 ? "O2" : "J2",
            std::vector<double>{}, 1.0};
  }

  const bool defective =
      l1 == l2 &&
      numerical_rank(g - l1 * GeneratorMatrix::identity(2), tol) == 1;
  if (defective) {
    switch (list) {
      case Level::Smooth:
      case Level::Lipschitz:
        return {"J2(1)", {}, l1};
      case Level::AllHolder:
        return {"diag(a,1)", {1.0}, l1};
      default:
        return {"I2", {}, l1};
    }
  }

  // Diagonalizable real pair, not both zero. Normalize |s1| <= |s2|.
  double s1 = l1;
  double s2 = l2;
  if (std::abs(s1) > std::abs(s2)) std::swap(s1, s2);
  double a;
  double alpha;
  if (std::abs(std::abs(s1) - std::abs(s2)) <=
      tol.alpha_match_tol * std::max(1.0, std::abs(s2))) {
    if (s1 == s2) {
      a = 1.0;
      alpha = s2;
    } else {
      a = -1.0;
      alpha = std::abs(s2);
    }
  } else {
    a = snap_unit(s1 / s2, tol.alpha_match_tol);
    alpha = s2;
  }

  if (list == Level::Topological) {
    if (s1 == 0.0) return {"diag(0,1)", {}, s2};
    if (a < 0.0) return {"diag(-1,1)", {}, s1 > 0.0 ? s1 : std::abs(s2)};
    return {"I2", {}, s2};
  }
  return {"diag(a,1)", {a}, alpha};
}

Canon complex_d1(Cplx z, Level list) {
  const double x = z.real();
  const double y = z.imag();
  if (x == 0.0 && y == 0.0) return {"c:0", {}, 1.0};
  if (x == 0.0) return {"c:i", {}, y};
  if (list == Level::Smooth && y != 0.0) return {"c:1+ib", {y / x}, x};
  return {"c:1", {}, x};
}

Canon complex_d2(const ComplexMatrix& m, double radius, Level list,
                 const ToleranceProfile& tol) {
  Eigen::MatrixXcd em(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) em(i, j) = m.at(i, j);
  }
  std::vector<Cplx> zs = detail::small_complex_eigenvalues(em);
  const bool equal = std::abs(zs[0] - zs[1]) <= radius;
  if (equal) {
    const Cplx mean = 0.5 * (zs[0] + zs[1]);
    zs[0] = zs[1] = mean;
  }
  for (Cplx& z : zs) {
    double re = std::abs(z.real()) <= radius ? 0.0 : z.real();
    double im = std::abs(z.imag()) <= radius ? 0.0 : z.imag();
    z = Cplx(re, im);
  }

  if (equal && zs[0] == Cplx(0.0, 0.0)) {
    return {detail::rank_of(em, tol.rank_tol) == 0 ? "c:O2" : "c:N2",
            std::vector<double>{}, 1.0};
  }

  const bool defective =
      equal &&
      detail::rank_of(Eigen::MatrixXcd(em - zs[0] *
                                                Eigen::MatrixXcd::Identity(
                                                    2, 2)),
                      tol.rank_tol) == 1;
  if (defective) {
    const double x = zs[0].real();
    const double y = zs[0].imag();
    if (x == 0.0) return {"c:J(i)", {}, y};
    switch (list) {
      case Level::Smooth:
        if (y == 0.0) return {"c:J(1)", {}, x};
        return {"c:J(1+ib)", {y / x}, x};
      case Level::Lipschitz:
        if (y == 0.0) return {"c:J(1)", {}, x};
        return {"c:J(1+ib)", {std::abs(y / x)}, x};
      case Level::AllHolder:
        return {"c:diag(a,1)", {1.0}, x};
      default:
        return {"c:I2", {}, x};
    }
  }

  Cplx z1 = zs[0];
  Cplx z2 = zs[1];
  const auto close = [&](double u, double v) {
    return std::abs(u - v) <= tol.alpha_match_tol * std::max(1.0, std::abs(v));
  };

  if (z1.real() == 0.0 && z2.real() == 0.0) {
    // Pure rotations: the diag(ia, i) family.
    double b1 = z1.imag();
    double b2 = z2.imag();
    if (std::abs(b1) > std::abs(b2)) std::swap(b1, b2);
    if (close(std::abs(b1), std::abs(b2))) {
      if (b1 == b2) return {"c:diag(ia,i)", {1.0}, b2};
      if (list == Level::Smooth) return {"c:diag(ia,i)", {-1.0}, std::abs(b2)};
      return {"c:diag(ia,i)", {1.0}, std::abs(b2)};
    }
    if (list == Level::Smooth) {
      return {"c:diag(ia,i)", {snap_unit(b1 / b2, tol.alpha_match_tol)}, b2};
    }
    return {"c:diag(ia,i)",
            {snap_unit(std::abs(b1 / b2), tol.alpha_match_tol)},
            std::abs(b2)};
  }

  // At least one nonzero real part; order so |Re z1| <= |Re z2|.
  if (std::abs(z1.real()) > std::abs(z2.real())) std::swap(z1, z2);
  bool re_tie_opposite = false;
  if (z1.real() != 0.0 && close(std::abs(z1.real()), std::abs(z2.real()))) {
    if (close(z1.real(), z2.real())) {
      if (z1.imag() > z2.imag()) std::swap(z1, z2);
    } else {
      re_tie_opposite = true;
      if (z2.real() < 0.0) std::swap(z1, z2);
    }
  }
  const double x1 = z1.real();
  const double y1 = z1.imag();
  const double x2 = z2.real();
  const double y2 = z2.imag();

  if (list == Level::Smooth) {
    const double alpha = x2;
    const double a = re_tie_opposite
                         ? -1.0
                         : snap_unit(x1 / x2, tol.alpha_match_tol);
    const double b = y1 / alpha;
    const double c = y2 / alpha;
    if (b == 0.0 && c == 0.0) return {"c:diag(a,1)", {a}, alpha};
    if (a == 0.0 && c == 0.0) return {"c:diag(ib,1)", {b}, alpha};
    return {"c:diag(a+ib,1+ic)", {a, b, c}, alpha};
  }
  if (list == Level::Lipschitz || list == Level::AllHolder) {
    if (x1 == 0.0) {
      if (y1 == 0.0) return {"c:diag(a,1)", {0.0}, x2};
      return {"c:diag(ib,1)", {std::abs(y1 / x2)}, x2};
    }
    const double a = re_tie_opposite
                         ? -1.0
                         : snap_unit(x1 / x2, tol.alpha_match_tol);
    return {"c:diag(a,1)", {a}, re_tie_opposite ? std::abs(x2) : x2};
  }
  // Topological list.
  if (x1 == 0.0) {
    if (y1 == 0.0) return {"c:diag(0,1)", {}, x2};
    return {"c:diag(i,1)", {}, x2 > 0.0 ? std::abs(y1) : -std::abs(y1)};
  }
  if (x1 * x2 < 0.0) {
    return {"c:diag(-1,1)", {}, x1 > 0.0 ? x1 : std::abs(x2)};
  }
  return {"c:I2", {}, x2};
}

ComplexMatrix cmat1(Cplx z) {
  ComplexMatrix m(1);
  m.at(0, 0) = z;
  return m;
}

ComplexMatrix cmat2(Cplx a11, Cplx a12, Cplx a21, Cplx a22) {
  ComplexMatrix m(2);
  m.at(0, 0) = a11;
  m.at(0, 1) = a12;
  m.at(1, 0) = a21;
  m.at(1, 1) = a22;
  return m;
}

GeneratorMatrix real_representative(const std::string& label,
                                    const std::vector<double>& p) {
  if (label == "0") return GeneratorMatrix::diagonal({0.0});
  if (label == "1") return GeneratorMatrix::diagonal({1.0});
  if (label == "O2") return GeneratorMatrix(2);
  if (label == "J2") return GeneratorMatrix(2, {0, 1, 0, 0});
  if (label == "J1(i)") return GeneratorMatrix(2, {0, -1, 1, 0});
  if (label == "J2(1)") return GeneratorMatrix(2, {1, 1, 0, 1});
  if (label == "J1(1+ib)") {
    return GeneratorMatrix(2, {1.0, -p[0], p[0], 1.0});
  }
  if (label == "diag(a,1)") return GeneratorMatrix::diagonal({p[0], 1.0});
  if (label == "diag(-1,1)") return GeneratorMatrix::diagonal({-1.0, 1.0});
  if (label == "diag(0,1)") return GeneratorMatrix::diagonal({0.0, 1.0});
  return GeneratorMatrix::identity(2);  // "I2"
}

GeneratorMatrix complex_representative(const std::string& label,
                                       const std::vector<double>& p) {
  const Cplx i(0.0, 1.0);
  ComplexMatrix m;
  if (label == "c:0") {
    m = cmat1(0.0);
  } else if (label == "c:i") {
    m = cmat1(i);
  } else if (label == "c:1") {
    m = cmat1(1.0);
  } else if (label == "c:1+ib") {
    m = cmat1(Cplx(1.0, p[0]));
  } else if (label == "c:O2") {
    m = ComplexMatrix(2);
  } else if (label == "c:N2") {
    m = cmat2(0.0, 1.0, 0.0, 0.0);
  } else if (label == "c:J(i)") {
    m = cmat2(i, 1.0, 0.0, i);
  } else if (label == "c:J(1)") {
    m = cmat2(1.0, 1.0, 0.0, 1.0);
  } else if (label == "c:J(1+ib)") {
    m = cmat2(Cplx(1.0, p[0]), 1.0, 0.0, Cplx(1.0, p[0]));
  } else if (label == "c:diag(ia,i)") {
    m = cmat2(Cplx(0.0, p[0]), 0.0, 0.0, i);
  } else if (label == "c:diag(a,1)") {
    m = cmat2(p[0], 0.0, 0.0, 1.0);
  } else if (label == "c:diag(ib,1)") {
    m = cmat2(Cplx(0.0, p[0]), 0.0, 0.0, 1.0);
  } else if (label == "c:diag(a+ib,1+ic)") {
    m = cmat2(Cplx(p[0], p[1]), 0.0, 0.0, Cplx(1.0, p[2]));
  } else if (label == "c:diag(i,1)") {
    m = cmat2(i, 0.0, 0.0, 1.0);
  } else if (label == "c:diag(-1,1)") {
    m = cmat2(-1.0, 0.0, 0.0, 1.0);
  } else if (label == "c:diag(0,1)") {
    m = cmat2(0.0, 0.0, 0.0, 1.0);
  } else {  // "c:I2"
    m = cmat2(1.0, 0.0, 0.0, 1.0);
  }
  return realify(m);
}

}  // namespace

CanonicalClass canon2(const GeneratorMatrix& a, Level level,
                      const ToleranceProfile& tol) {
  if (level == Level::BetaMinus || level == Level::BetaPlus) {
    throw DomainError(
        "the planar catalogs are indexed by the topological, some-holder, "
        "all-holder, lipschitz, and smooth levels");
  }
  const Level list = list_of(level);
  Canon c;
  bool complex_path = false;
  if (a.origin() == GeneratorMatrix::Origin::RealifiedComplex) {
    complex_path = true;
    if (a.dim() != 2 && a.dim() != 4) {
      throw UnsupportedDimension(
          "no planar canonical form for " + a.display_name() +
          ": complex dimension " + std::to_string(a.dim() / 2) +
          " is outside {1, 2}");
    }
    const ComplexMatrix m = derealify(a);
    if (a.dim() == 2) {
      Cplx z = m.at(0, 0);
      const double radius = tol.eig_radius(a);
      const double re = std::abs(z.real()) <= radius ? 0.0 : z.real();
      const double im = std::abs(z.imag()) <= radius ? 0.0 : z.imag();
      c = complex_d1(Cplx(re, im), list);
    } else {
      c = complex_d2(m, tol.eig_radius(a), list, tol);
    }
  } else {
    if (a.dim() != 1 && a.dim() != 2) {
      throw UnsupportedDimension("no planar canonical form for " +
                                 a.display_name() + ": dimension " +
                                 std::to_string(a.dim()) +
                                 " is outside {1, 2}");
    }
    if (a.dim() == 1) {
      const Spectrum sp = eigenvalues(a, tol);
      c = real_d1(sp.entries[0].z.real());
    } else {
      c = real_d2(a, list, tol);
    }
  }

  CanonicalClass out;
  out.label = c.label;
  out.parameters = c.params;
  out.alpha = c.alpha;
  out.level = level;
  out.representative = complex_path
                           ? complex_representative(c.label, c.params)
                           : real_representative(c.label, c.params);
  out.representative.set_label(c.label);
  return out;
}

}  // namespace linflow
