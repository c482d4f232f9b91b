// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT
//
// End-to-end acceptance checks for the library. Each criterion prints one
// [PASS]/[FAIL] line; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "linflow/conjugacy.hpp"
#include "linflow/equivalence.hpp"
#include "linflow/floweval.hpp"

using namespace linflow;

namespace {

// Pinned acceptance tolerances.
constexpr double kBlockResidualMax = 1e-8;
constexpr double kBlockSeconds = 5.0;
constexpr double kUnwindResidualMax = 1e-10;
constexpr double kUnwindRoundTripMax = 1e-12;
constexpr double kRhoTol = 1e-12;
constexpr double kCatalogSeconds = 30.0;
constexpr double kExpRelMax = 1e-10;
constexpr double kPeriodValueTol = 1e-9;
constexpr double kPeriodReturnTol = 1e-8;
constexpr double kPowerBetaTol = 0.05;
constexpr double kIdentityBetaTol = 0.02;
constexpr std::uint64_t kExpSeed = 2026;
constexpr std::uint64_t kCatalogSeed = 97;
constexpr std::uint64_t kHierarchySeed = 811;

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s (%s)\n", pass ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

GeneratorMatrix diag2(double a, double b) {
  GeneratorMatrix g(2);
  g(0, 0) = a;
  g(1, 1) = b;
  return g;
}

GeneratorMatrix jordan_block(std::size_t m, double a) {
  GeneratorMatrix g(m);
  for (std::size_t i = 0; i < m; ++i) {
    g(i, i) = a;
    if (i + 1 < m) g(i, i + 1) = 1.0;
  }
  return g;
}

GeneratorMatrix spiral_block(double a, double b) {
  GeneratorMatrix g(2);
  g(0, 0) = a;
  g(0, 1) = -b;
  g(1, 0) = b;
  g(1, 1) = a;
  return g;
}

GeneratorMatrix rotations(const Vec& rates) {
  GeneratorMatrix g(2 * rates.size());
  for (std::size_t p = 0; p < rates.size(); ++p) {
    g(2 * p, 2 * p + 1) = -rates[p];
    g(2 * p + 1, 2 * p) = rates[p];
  }
  return g;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Random orthogonal basis times a +-[0.5,2] diagonal: an invertible witness
// whose inverse is available in closed form.
void random_similarity(std::mt19937_64& eng, std::size_t d, GeneratorMatrix& q,
                       GeneratorMatrix& q_inv) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::vector<Vec> cols;
  while (cols.size() < d) {
    Vec v(d);
    for (double& e : v) e = u(eng);
    for (const Vec& c : cols) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += v[i] * c[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= dot * c[i];
    }
    double nrm = 0.0;
    for (double e : v) nrm += e * e;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-3) continue;
    for (double& e : v) e /= nrm;
    cols.push_back(std::move(v));
  }
  GeneratorMatrix ortho(d), diag(d), diag_inv(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) ortho(i, j) = cols[j][i];
    const double s = (eng() & 1) ? 1.0 : -1.0;
    const double m = s * mag(eng);
    diag(j, j) = m;
    diag_inv(j, j) = 1.0 / m;
  }
  q = ortho * diag;
  q_inv = diag_inv * ortho.transposed();
}

void criterion_block_to_diag() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t m : {1u, 2u, 3u, 4u}) {
    for (double a : {-2.0, -1.0, 1.0, 3.0}) {
      const ConjugacyMap h = build_block_to_diag(m, a);
      GeneratorMatrix diag(m);
      for (std::size_t i = 0; i < m; ++i) diag(i, i) = a;
      worst = std::max(worst, verify_relation(h, diag, jordan_block(m, a), 1.0));
    }
  }
  const double secs = elapsed_seconds(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "worst residual %.3e, %.2f s", worst,
                secs);
  report(1, "log-corrected block maps conjugate on the default grid",
         worst < kBlockResidualMax && secs < kBlockSeconds, detail);
}

void criterion_unwind() {
  double worst = 0.0;
  double worst_rt = 0.0;
  const std::vector<Vec> samples{{0.3, -0.7}, {1e-4, 2e-3}, {-0.5, 0.9},
                                 {1.5, -1.2}, {-1.9, 0.2}};
  for (double a : {-2.0, -1.0, 1.0, 2.0}) {
    for (double b : {-2.0, -1.0, 1.0, 2.0}) {
      const ConjugacyMap g = build_unwind(a, b);
      GeneratorMatrix diag(2);
      diag(0, 0) = a;
      diag(1, 1) = a;
      worst = std::max(worst, verify_relation(g, spiral_block(a, b), diag, 1.0));
      for (const Vec& x : samples) {
        const Vec rt = g.inverse_at(g(x));
        worst_rt =
            std::max(worst_rt, std::hypot(rt[0] - x[0], rt[1] - x[1]));
      }
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "worst residual %.3e, worst roundtrip %.3e", worst, worst_rt);
  report(2, "spiral unwind conjugates and inverts",
         worst < kUnwindResidualMax && worst_rt < kUnwindRoundTripMax, detail);
}

void criterion_cross_ratio() {
  GeneratorMatrix a(5), b(5);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = 2.0;
  a(2, 3) = 1.0;
  a(3, 3) = 2.0;
  a(4, 4) = 4.0;
  for (std::size_t i = 0; i < 5; ++i) b(i, i) = 1.0;

  const CrossRatio cr = cross_ratio(scu_split(a), scu_split(b));
  const bool rho_ok = std::abs(cr.rho - 0.25) < kRhoTol;
  const bool minus_half = decide_beta(a, b, 0.5, BetaSide::Minus).equivalent;
  const bool minus_above = decide_beta(a, b, 0.6, BetaSide::Minus).equivalent;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "rho %.12f, beta 0.5 minus %s, beta 0.6 minus %s", cr.rho,
                minus_half ? "yes" : "no", minus_above ? "yes" : "no");
  report(3, "extremal exponent ratio for rates (1,1,2,2,4) vs ones",
         rho_ok && minus_half && !minus_above, detail);
}

void criterion_planar_catalog() {
  const auto start = std::chrono::steady_clock::now();
  struct Rep {
    const char* label;
    GeneratorMatrix gen;
  };
  GeneratorMatrix nilpotent(2);
  nilpotent(0, 1) = 1.0;
  const std::vector<Rep> reps{
      {"O2", GeneratorMatrix(2)},
      {"J2", nilpotent},
      {"J1(i)", spiral_block(0.0, 1.0)},
      {"diag(0,1)", diag2(0.0, 1.0)},
      {"I2", GeneratorMatrix::identity(2)},
      {"diag(-1,1)", diag2(-1.0, 1.0)},
  };

  int negative = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (!decide_topological(reps[i].gen, reps[j].gen).equivalent) ++negative;
    }
  }

  std::mt19937_64 eng(kCatalogSeed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int matched = 0;
  int agreed = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    GeneratorMatrix m(2);
    m(0, 0) = u(eng);
    m(0, 1) = u(eng);
    m(1, 0) = u(eng);
    m(1, 1) = u(eng);
    int hits = 0;
    std::string hit_label;
    for (const Rep& rep : reps) {
      if (decide_topological(m, rep.gen).equivalent) {
        ++hits;
        hit_label = rep.label;
      }
    }
    if (hits == 1) ++matched;
    if (hits == 1 && canon2(m, Level::Topological).label == hit_label) {
      ++agreed;
    }
  }
  const double secs = elapsed_seconds(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d/15 inequivalent, %d/%d unique matches, %d/%d label "
                "agreement, %.2f s",
                negative, matched, trials, agreed, trials, secs);
  report(4, "planar topological catalog is complete and canonical",
         negative == 15 && matched == trials && agreed == trials &&
             secs < kCatalogSeconds,
         detail);
}

void criterion_level_separation() {
  bool ok = true;
  std::string why;

  const EquivalenceVerdict t1 =
      decide_topological(diag2(-1.0, 1.0), diag2(-0.5, 1.0));
  const EquivalenceVerdict h1 = decide_holder(diag2(-1.0, 1.0), diag2(-0.5, 1.0));
  if (!(t1.equivalent && !h1.equivalent)) {
    ok = false;
    why += " saddle-rates";
  }

  ComplexMatrix one_pi(1);
  one_pi.at(0, 0) = Cplx(1.0, 1.0);
  const GeneratorMatrix spiral = realify(one_pi);
  const EquivalenceVerdict h2 = decide_holder(jordan_block(2, 1.0), spiral);
  if (!(h2.equivalent && h2.alpha && std::abs(*h2.alpha - 1.0) < 1e-12)) {
    ok = false;
    why += " defective-vs-spiral";
  }

  const EquivalenceVerdict h3 = decide_holder(jordan_block(2, 1.0), diag2(1.0, 1.0));
  const EquivalenceVerdict s3 = decide_smooth(jordan_block(2, 1.0), diag2(1.0, 1.0));
  if (!(h3.equivalent && !s3.equivalent)) {
    ok = false;
    why += " defective-vs-diagonal";
  }

  ComplexMatrix one_mi(1);
  one_mi.at(0, 0) = Cplx(1.0, -1.0);
  const EquivalenceVerdict h4 = classify_complex(one_pi, one_mi, Level::AllHolder);
  const EquivalenceVerdict s4 = classify_complex(one_pi, one_mi, Level::Smooth);
  if (!(h4.equivalent && !s4.equivalent)) {
    ok = false;
    why += " conjugate-rotations";
  }

  report(5, "witness pairs separate the equivalence levels", ok,
         ok ? "4/4 separations" : "failed:" + why);
}

void criterion_exponential_oracle() {
  std::mt19937_64 eng(kExpSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t d = 1 + eng() % 6;
    GeneratorMatrix a(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a(i, j) = u(eng);
    }
    const double bound = 10.0 / std::max(1.0, a.norm());
    const double t = u(eng) * bound;
    Vec x(d);
    for (double& e : x) e = u(eng);

    const Vec y1 = flow_map(a, t, x);
    const Vec y2 = exp_oracle(a, t).apply(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      num += (y1[i] - y2[i]) * (y1[i] - y2[i]);
      den += y2[i] * y2[i];
    }
    worst = std::max(worst, std::sqrt(num) / (1.0 + std::sqrt(den)));
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst relative deviation %.3e over %d",
                worst, trials);
  report(6, "closed-form flow agrees with the series oracle",
         worst < kExpRelMax, detail);
}

void criterion_periods() {
  const GeneratorMatrix g = rotations({2.0, 2.0, 3.0});
  const Vec x{0.3, 0.1, -0.2, 0.4, 0.5, -0.6};
  const PeriodResult p = minimal_period(g, x);
  const bool finite = p.kind == PeriodResult::Kind::Finite;
  const bool value_ok =
      finite && std::abs(p.value - 2.0 * std::numbers::pi) < kPeriodValueTol;

  double return_err = 0.0;
  if (finite) {
    const Vec y = flow_map(g, p.value, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      return_err = std::max(return_err, std::abs(y[i] - x[i]));
    }
  }

  const std::vector<Cplx> s1 = imaginary_spectrum(g);
  const std::vector<Cplx> s2 = imaginary_spectrum(rotations({1.0, 2.0, 3.0}));
  bool distinct = s1.size() != s2.size();
  if (!distinct) {
    for (std::size_t i = 0; i < s1.size(); ++i) {
      if (std::abs(s1[i] - s2[i]) > 1e-9) distinct = true;
    }
  }

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "period %.9f, return error %.3e, multisets %s",
                finite ? p.value : -1.0, return_err,
                distinct ? "distinct" : "equal");
  report(7, "rotation rates (2,2,3) period and spectrum bookkeeping",
         value_ok && return_err < kPeriodReturnTol && distinct, detail);
}

void criterion_hierarchy() {
  std::mt19937_64 eng(kHierarchySeed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const int trials = 500;
  int chain_bad = 0;
  int witness_bad = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t d = 1 + eng() % 4;
    GeneratorMatrix a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        a(i, j) = u(eng);
        b(i, j) = u(eng);
      }
    }

    const bool topo = decide_topological(a, b).equivalent;
    const bool holder = decide_holder(a, b).equivalent;
    const bool smooth = decide_smooth(a, b).equivalent;
    if ((holder && !topo) || (smooth && !holder)) ++chain_bad;

    GeneratorMatrix q(d), q_inv(d);
    random_similarity(eng, d, q, q_inv);
    const GeneratorMatrix conj = q * a * q_inv;
    bool all = decide_topological(a, conj).equivalent &&
               decide_holder(a, conj).equivalent &&
               decide_smooth(a, conj).equivalent;
    if (d <= 2) all = all && decide_lipschitz2(a, conj).equivalent;
    if (!all) ++witness_bad;
  }
  char detail[112];
  std::snprintf(detail, sizeof(detail),
                "%d chain violations, %d witness misses over %d", chain_bad,
                witness_bad, trials);
  report(8, "level hierarchy and similarity witnesses on random pairs",
         chain_bad == 0 && witness_bad == 0, detail);
}

void criterion_exponent_estimation() {
  const double alpha = 1.0 / std::numbers::sqrt2;
  const ConjugacyMap power = build_power_map({-1.0, -2.0}, {-1.0, -4.0}, alpha);
  const HolderEstimate ep = estimate_holder_exponent(power, 1.0);
  const ConjugacyMap id = linear_map(GeneratorMatrix::identity(3));
  const HolderEstimate ei = estimate_holder_exponent(id, 1.0);
  char detail[96];
  std::snprintf(detail, sizeof(detail), "power beta %.4f, identity beta %.4f",
                ep.beta, ei.beta);
  report(9, "exponent estimator recovers known regularity",
         std::abs(ep.beta - alpha) < kPowerBetaTol &&
             std::abs(ei.beta - 1.0) < kIdentityBetaTol,
         detail);
}

}  // namespace

int main() {
  criterion_block_to_diag();
  criterion_unwind();
  criterion_cross_ratio();
  criterion_planar_catalog();
  criterion_level_separation();
  criterion_exponential_oracle();
  criterion_periods();
  criterion_hierarchy();
  criterion_exponent_estimation();
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
