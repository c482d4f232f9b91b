// Copyright (c) 2026 The linflow authors
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "linflow/conjugacy.hpp"

using namespace linflow;

namespace {

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

}  // namespace

TEST_SUITE("block to diag map") {
  TEST_CASE("pinned values at m = 2") {
    const ConjugacyMap h = build_block_to_diag(2, 1.0);
    const Vec y = h({1.0, 0.0});
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));

    const double e = std::exp(1.0);
    const Vec y2 = h({e, 0.0});
    CHECK(y2[0] == doctest::Approx(e).epsilon(1e-14));
    CHECK(y2[1] == doctest::Approx(e).epsilon(1e-14));

    const Vec back = h.inverse_at(y2);
    CHECK(back[0] == doctest::Approx(e).epsilon(1e-13));
    CHECK(std::abs(back[1]) < 1e-13);
  }

  TEST_CASE("origin is fixed") {
    const ConjugacyMap h = build_block_to_diag(3, -2.0);
    const Vec y = h({0.0, 0.0, 0.0});
    CHECK(y == Vec{0.0, 0.0, 0.0});
    CHECK(h.dim_in() == 3);
    CHECK(h.dim_out() == 3);
  }

  TEST_CASE("relation residual over sizes and rates") {
    double worst = 0.0;
    for (std::size_t m : {1u, 2u, 3u, 4u}) {
      for (double a : {-2.0, -1.0, 1.0, 3.0}) {
        const ConjugacyMap h = build_block_to_diag(m, a);
        GeneratorMatrix diag(m);
        for (std::size_t i = 0; i < m; ++i) diag(i, i) = a;
        worst = std::max(worst, verify_relation(h, diag, jordan_block(m, a), 1.0));
      }
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("holder class weakens with the block size") {
    CHECK(build_block_to_diag(1, 2.0).holder_class().tag ==
          HolderClass::Tag::Lipschitz);
    CHECK(build_block_to_diag(2, 2.0).holder_class().tag ==
          HolderClass::Tag::AllHolder);
  }

  TEST_CASE("near-unit slope at small radius") {
    const ConjugacyMap h = build_block_to_diag(2, 1.0);
    const HolderEstimate est = estimate_holder_exponent(h, 1e-3);
    CHECK(est.beta >= 0.9);
  }
}

TEST_SUITE("unwind map") {
  TEST_CASE("pinned value on the negative axis") {
    const ConjugacyMap g = build_unwind(1.0, 1.0);
    const double epi = std::exp(std::numbers::pi);
    const Vec y = g({-epi, 0.0});
    // Rotation by -log|x| carries (-e^pi, 0) to (e^pi, 0).
    CHECK(std::abs(y[0] - epi) < 1e-9 * epi);
    CHECK(std::abs(y[1]) < 1e-9 * epi);
  }

  TEST_CASE("relation and roundtrip over the rate grid") {
    double worst = 0.0;
    double worst_rt = 0.0;
    const std::vector<Vec> probes{{0.3, -0.7}, {1e-4, 2e-3}, {-0.5, 0.9}};
    for (double a : {-2.0, -1.0, 1.0, 2.0}) {
      for (double b : {-2.0, -1.0, 1.0, 2.0}) {
        const ConjugacyMap u = build_unwind(a, b);
        GeneratorMatrix diag(2);
        diag(0, 0) = a;
        diag(1, 1) = a;
        worst = std::max(worst, verify_relation(u, spiral_block(a, b), diag, 1.0));
        for (const Vec& x : probes) {
          const Vec rt = u.inverse_at(u(x));
          worst_rt = std::max(worst_rt, std::hypot(rt[0] - x[0], rt[1] - x[1]));
        }
      }
    }
    CHECK(worst < 1e-10);
    CHECK(worst_rt < 1e-12);
  }

  TEST_CASE("unwind is lipschitz") {
    CHECK(build_unwind(1.0, 2.0).holder_class().tag ==
          HolderClass::Tag::Lipschitz);
  }
}

TEST_SUITE("complex block to diag map") {
  TEST_CASE("pinned value and relation at m = 2") {
    const ConjugacyMap h = build_complex_block_to_diag(2, 1.0, 1.0);
    const Vec y = h({1.0, 0.0, 0.0, 0.0});
    CHECK(y[0] == 0.0);
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y[2] == 0.0);
    CHECK(y[3] == 0.0);

    // Interleaved diag[J_1(1+i), J_1(1+i)].
    GeneratorMatrix diag(4);
    for (std::size_t p = 0; p < 2; ++p) {
      diag(2 * p, 2 * p) = 1.0;
      diag(2 * p, 2 * p + 1) = -1.0;
      diag(2 * p + 1, 2 * p) = 1.0;
      diag(2 * p + 1, 2 * p + 1) = 1.0;
    }
    // Realified J_2(1+i).
    GeneratorMatrix jm(4);
    jm(0, 0) = 1.0;
    jm(0, 1) = 1.0;
    jm(0, 2) = -1.0;
    jm(1, 1) = 1.0;
    jm(1, 3) = -1.0;
    jm(2, 0) = 1.0;
    jm(2, 2) = 1.0;
    jm(2, 3) = 1.0;
    jm(3, 1) = 1.0;
    jm(3, 3) = 1.0;
    CHECK(verify_relation(h, diag, jm, 1.0) < 1e-8);

    const Vec x{0.3, -0.7, 0.2, 0.9};
    const Vec rt = h.inverse_at(h(x));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(rt[i] - x[i]) < 1e-12);
    }
  }
}

TEST_SUITE("power map") {
  TEST_CASE("exponents and declared class") {
    const double alpha = 1.0 / std::numbers::sqrt2;
    const ConjugacyMap h = build_power_map({-1.0, -2.0}, {-1.0, -4.0}, alpha);
    const HolderClass hc = h.holder_class();
    CHECK(hc.tag == HolderClass::Tag::Beta);
    CHECK(hc.gamma == doctest::Approx(alpha).epsilon(1e-12));

    // x -> sign(x)|x|^p with p = alpha * b / a per coordinate.
    const Vec y = h({0.25, -0.5});
    CHECK(y[0] == doctest::Approx(std::pow(0.25, 1.0 / std::numbers::sqrt2)));
    CHECK(y[1] == doctest::Approx(-std::pow(0.5, std::numbers::sqrt2)));
    const Vec rt = h.inverse_at(y);
    CHECK(rt[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rt[1] == doctest::Approx(-0.5).epsilon(1e-12));
  }

  TEST_CASE("estimator recovers the exponent") {
    const double alpha = 1.0 / std::numbers::sqrt2;
    const ConjugacyMap h = build_power_map({-1.0, -2.0}, {-1.0, -4.0}, alpha);
    const HolderEstimate est = estimate_holder_exponent(h, 1.0);
    CHECK(std::abs(est.beta - alpha) < 0.05);
    CHECK(est.std_error < 0.05);
    CHECK(est.beta == doctest::Approx(std::min(est.forward, est.inverse)));
  }

  TEST_CASE("estimator is exact on linear maps") {
    const ConjugacyMap id = linear_map(GeneratorMatrix::identity(3));
    const HolderEstimate est = estimate_holder_exponent(id, 1.0);
    CHECK(est.beta == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("sign mismatch is rejected") {
    CHECK_THROWS_AS(build_power_map({-1.0, 2.0}, {-1.0, -4.0}, 1.0),
                    DomainError);
    CHECK_THROWS_AS(build_power_map({-1.0}, {-2.0}, -1.0), DomainError);
  }
}

TEST_SUITE("map algebra") {
  TEST_CASE("linear maps require invertibility") {
    GeneratorMatrix q(2);
    q(0, 0) = 1.0;
    q(1, 0) = 1.0;
    CHECK_THROWS_AS(linear_map(q), DomainError);
  }

  TEST_CASE("composition evaluates first to last") {
    const ConjugacyMap f = linear_map(GeneratorMatrix::diagonal({2.0, 2.0}));
    const ConjugacyMap g = build_unwind(1.0, 1.0);
    const ConjugacyMap c = compose({f, g});
    const Vec x{0.3, -0.4};
    const Vec want = g(f(x));
    const Vec got = c(x);
    CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-14));
    CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-14));
    const Vec rt = c.inverse_at(got);
    CHECK(rt[0] == doctest::Approx(x[0]).epsilon(1e-12));
    CHECK(rt[1] == doctest::Approx(x[1]).epsilon(1e-12));
    CHECK(c.kind() == ConjugacyMap::Kind::Composition);
  }

  TEST_CASE("product acts blockwise in the adapted basis") {
    const ConjugacyMap p = product_map({
        {build_block_to_diag(2, 1.0), {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}},
        {linear_map(GeneratorMatrix::diagonal({3.0})), {{0.0, 0.0, 1.0}}},
    });
    CHECK(p.dim_in() == 3);
    const Vec y = p({1.0, 0.0, 2.0});
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[2] == doctest::Approx(6.0));
    const Vec rt = p.inverse_at(y);
    CHECK(rt[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rt[1]) < 1e-12);
    CHECK(rt[2] == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("inversion swaps evaluation directions") {
    const ConjugacyMap h = build_block_to_diag(2, 1.0);
    const ConjugacyMap hinv = h.inverted();
    CHECK(hinv.is_inverted());
    const Vec x{0.7, -0.2};
    const Vec a = h(x);
    const Vec b = hinv.inverse_at(x);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-14));
    // Double inversion restores the original direction.
    const Vec c = hinv.inverted()(x);
    CHECK(c[0] == doctest::Approx(a[0]).epsilon(1e-14));
  }

  TEST_CASE("holder class combination rules") {
    const HolderClass lip{HolderClass::Tag::Lipschitz, 1.0};
    const HolderClass all{HolderClass::Tag::AllHolder, 1.0};
    const HolderClass b1{HolderClass::Tag::Beta, 0.5};
    const HolderClass b2{HolderClass::Tag::Beta, 0.8};

    CHECK(weakest(lip, all).tag == HolderClass::Tag::AllHolder);
    CHECK(weakest(all, b1).tag == HolderClass::Tag::Beta);
    CHECK(weakest(b1, b2).gamma == doctest::Approx(0.5));
    CHECK(weakest(lip, lip).tag == HolderClass::Tag::Lipschitz);

    CHECK(composed(lip, lip).tag == HolderClass::Tag::Lipschitz);
    CHECK(composed(all, lip).tag == HolderClass::Tag::AllHolder);
    const HolderClass cc = composed(b1, b2);
    CHECK(cc.tag == HolderClass::Tag::Beta);
    CHECK(cc.gamma == doctest::Approx(0.4));
  }
}

TEST_SUITE("map serialization") {
  TEST_CASE("round trip preserves evaluation and the inverted flag") {
    const ConjugacyMap h = build_block_to_diag(3, -2.0).inverted();
    const std::string text = h.to_json(2);
    const ConjugacyMap h2 = ConjugacyMap::from_json(text);
    CHECK(h2.is_inverted());
    CHECK(h2.kind() == ConjugacyMap::Kind::BlockToDiag);
    const Vec x{0.4, -0.2, 0.8};
    const Vec a = h(x);
    const Vec b = h2(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
  }

  TEST_CASE("composite documents reconstruct the whole tree") {
    const ConjugacyMap c = compose({
        linear_map(GeneratorMatrix::diagonal({2.0, 0.5})),
        build_unwind(1.0, -1.0),
    });
    const ConjugacyMap c2 = ConjugacyMap::from_json(c.to_json());
    CHECK(c2.kind() == ConjugacyMap::Kind::Composition);
    const Vec x{0.3, 0.9};
    const Vec a = c(x);
    const Vec b = c2(x);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
  }

  TEST_CASE("malformed documents are parse errors") {
    CHECK_THROWS_AS(ConjugacyMap::from_json("{"), ParseError);
    CHECK_THROWS_AS(ConjugacyMap::from_json("{\"kind\":\"no-such-map\"}"),
                    ParseError);
    CHECK_THROWS_AS(ConjugacyMap::from_json("[1,2,3]"), ParseError);
  }

  TEST_CASE("kind names") {
    CHECK(to_string(ConjugacyMap::Kind::BlockToDiag) == "block-to-diag");
    CHECK(to_string(ConjugacyMap::Kind::Unwind) == "unwind");
    CHECK(to_string(ConjugacyMap::Kind::Power) == "power");
    CHECK(to_string(ConjugacyMap::Kind::Linear) == "linear");
  }
}

TEST_SUITE("relation verifier") {
  TEST_CASE("wrong maps report large residuals") {
    // Identity does not conjugate distinct diagonal flows.
    const ConjugacyMap id = linear_map(GeneratorMatrix::identity(2));
    const double r =
        verify_relation(id, GeneratorMatrix::diagonal({-1.0, 1.0}),
                        GeneratorMatrix::diagonal({-2.0, 3.0}), 1.0);
    CHECK(r > 0.1);
  }

  TEST_CASE("sampling spec is honored deterministically") {
    const ConjugacyMap h = build_block_to_diag(2, 1.0);
    GeneratorMatrix diag(2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 1.0;
    SamplingSpec spec;
    spec.x_count = 17;
    spec.t_points = 9;
    const double r1 = verify_relation(h, diag, jordan_block(2, 1.0), 1.0, spec);
    const double r2 = verify_relation(h, diag, jordan_block(2, 1.0), 1.0, spec);
    CHECK(r1 == r2);
    CHECK(r1 < 1e-8);
  }
}
