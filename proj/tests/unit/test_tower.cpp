#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "merotower/scenarios.hpp"
#include "merotower/tower.hpp"

using namespace merotower;
using namespace testing;

namespace {

/// Two-level tower with constant local distances, for hand arithmetic.
Tower toy_constants(double d0, double diam0, double d1, double diam1) {
  std::vector<TowerLevel> levels(2);
  for (int n = 0; n < 2; ++n) {
    levels[n].index = n;
    levels[n].sample = [](std::mt19937_64& rng) { return LevelPoint(sample_p2(rng)); };
  }
  auto same = [](const LevelPoint& a, const LevelPoint& b) {
    return coordinate_gap(std::get<ProjPoint>(a), std::get<ProjPoint>(b)) == 0.0;
  };
  levels[0].local_dist = [=](const LevelPoint& a, const LevelPoint& b) { return same(a, b) ? 0.0 : d0; };
  levels[0].diam = diam0;
  levels[1].local_dist = [=](const LevelPoint& a, const LevelPoint& b) { return same(a, b) ? 0.0 : d1 - d0; };
  levels[1].diam = diam1;
  levels[1].pi = [](const LevelPoint& x) { return x; };
  levels[1].s = [](const LevelPoint& x) { return x; };
  levels[1].lift = [](const LevelPoint& x) { return std::optional<LevelPoint>(x); };
  return Tower("constants", RationalMap::identity(2), std::move(levels));
}

}  // namespace

TEST_CASE("delta by hand") {
  // dist_1 = dist'_1 + dist_0 = 0.4, so delta = 0.3 / 1 + 0.4 / (2 * 2).
  const Tower t = toy_constants(0.3, 1.0, 0.4, 2.0);
  TruncatedPoint x{{LevelPoint(exact(1, 0, 0)), LevelPoint(exact(1, 0, 0))}};
  TruncatedPoint y{{LevelPoint(exact(0, 1, 0)), LevelPoint(exact(0, 1, 0))}};
  CHECK(std::abs(delta(t, x, y) - 0.4) < 1e-15);
  CHECK(delta(t, x, x) == 0.0);
  TruncatedPoint x0{{x.entries[0]}}, y0{{y.entries[0]}};
  CHECK(std::abs(delta(t, x0, y0) - 0.3) < 1e-15);
  CHECK_THROWS_AS(delta(t, x, y0), TowerError);
  const auto terms = delta_terms(t, x, y);
  REQUIRE(terms.size() == 2);
  CHECK(std::abs(terms[1] - 0.1) < 1e-15);
}

TEST_CASE("identity tower: sigma applies F and delta has a closed form") {
  const Tower t = identity_tower(squaring(), 6);
  CHECK(t.depth() == 6);
  CHECK(t.level(3).diam == 4.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const ProjPoint a = sample_p2(rng), b = sample_p2(rng);
    const TruncatedPoint x = lift_base_point(t, a, 6), y = lift_base_point(t, b, 6);
    for (const LevelPoint& e : x.entries) CHECK(coordinate_gap(std::get<ProjPoint>(e), a) == 0.0);
    // sum_n (n+1) FS / (2^n (n+1)) = FS (2 - 2^-6)
    CHECK(std::abs(delta(t, x, y) - fubini_study(a, b) * (2.0 - std::ldexp(1.0, -6))) < 1e-14);
    const TruncatedPoint sx = sigma(t, x);
    CHECK(sx.depth() == 5);
    CHECK(coordinate_gap(std::get<ProjPoint>(sx.entries[0]), *squaring().evaluate(a)) < 1e-12);
  }
  CHECK_THROWS_AS(identity_tower(guedj(), 2), TowerError);
}

TEST_CASE("sigma is rejected at depth 0 and iterates to F^N") {
  const Tower t = identity_tower(map3("z^2 + w*t", "w^2", "t^2 - z*w"), 4);
  TruncatedPoint x = lift_base_point(t, exact(1, 2, 3), 4);
  ProjPoint expect = exact(1, 2, 3);
  for (int k = 0; k < 4; ++k) {
    x = sigma(t, x);
    expect = *t.base_map().evaluate(expect);
  }
  CHECK(x.depth() == 0);
  CHECK(coordinate_gap(std::get<ProjPoint>(x.entries[0]), expect) < 1e-8);
  CHECK_THROWS_AS(sigma(t, x), TowerError);
}

TEST_CASE("Guedj tower: lifts, sigma and the fibre over I") {
  const Tower t = build_guedj_tower();
  CHECK(t.depth() == 1);
  CHECK(t.level(1).diam > 1.0);
  const TruncatedPoint x = lift_base_point(t, exact(1, 1, 1), 1);
  check_compatible(t, x);
  const TruncatedPoint sx = sigma(t, x);
  CHECK(coordinate_gap(std::get<ProjPoint>(sx.entries[0]), ProjPoint({1.0, 2.0, 1.0})) < 1e-12);
  CHECK_THROWS_AS(lift_base_point(t, exact(0, 1, 0), 1), TowerError);
  // With a hint on the exceptional curve the lift goes through.
  const std::optional<LevelPoint> hint = LevelPoint(SurfPoint{"beta=1", {0.0, 0.5}});
  const TruncatedPoint xi = lift_base_point(t, exact(0, 1, 0), 1, std::span(&hint, 1));
  // f o e1 o e2 at (t, alpha) = (0, 1/2) is [0 : 1 : 0] in this chart.
  CHECK(same_point(std::get<ProjPoint>(sigma(t, xi).entries[0]), exact(0, 1, 0)));
  const std::optional<LevelPoint> bad = LevelPoint(SurfPoint{"t=1", {0.5, 0.5}});
  CHECK_THROWS_AS(lift_base_point(t, exact(0, 1, 0), 1, std::span(&bad, 1)), TowerError);
}

TEST_CASE("pi_1 of exceptional points is the centre") {
  const Tower t = build_guedj_tower();
  const LevelPoint e2 = SurfPoint{"u=1", {0.0, Complex(0.2, 0.9)}};
  CHECK(same_point(std::get<ProjPoint>(t.level(1).pi(e2)), exact(0, 1, 0)));
}

TEST_CASE("lemma4_check on both towers") {
  const Lemma4Report id = lemma4_check(identity_tower(squaring(), 4), 30, 1);
  CHECK(id.max_discrepancy == 0.0);
  CHECK(id.entries.size() == 10);  // p = 0..3, l = 1..4-p
  const Lemma4Report g = lemma4_check(build_guedj_tower(), 100, 1);
  REQUIRE(g.entries.size() == 1);
  CHECK(g.entries[0].p == 0);
  CHECK(g.entries[0].l == 1);
  CHECK(g.max_discrepancy < 1e-8);
}

TEST_CASE("sigma commutes with the base map along orbits") {
  const Tower t = build_guedj_tower();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const ProjPoint x0 = sample_p2(rng);
    const TruncatedPoint x = lift_base_point(t, x0, 1);
    auto fx = t.base_map().evaluate(x0);
    REQUIRE(fx.has_value());
    CHECK(coordinate_gap(std::get<ProjPoint>(sigma(t, x).entries[0]), *fx) < 1e-8);
  }
}

TEST_CASE("continuity probe") {
  // Lipschitz oracle: FS(F x, F y) <= 2 FS(x, y) for squaring near the torus,
  // so eta should be of the order of epsilon / 2 or smaller.
  const Tower t = identity_tower(squaring(), 3);
  const ContinuityReport r = continuity_probe(t, 0.1, 400, 1);
  CHECK(r.eta > 0.0);
  CHECK(r.eta <= 0.1);
  CHECK(r.pairs + r.skipped == 400);

  const ContinuityReport gr = continuity_probe(build_guedj_tower(), 0.1, 2000, 1);
  CHECK(gr.eta > 0.0);
  CHECK(gr.pairs > 1900);
}

TEST_CASE("depth extension changes delta by at most 2^-N") {
  std::mt19937_64 rng(12);
  const Tower t = identity_tower(squaring(), 7);
  for (int i = 0; i < 100; ++i) {
    const ProjPoint a = sample_p2(rng), b = sample_p2(rng);
    for (int n = 1; n < 7; ++n) {
      const double dn = delta(t, lift_base_point(t, a, n), lift_base_point(t, b, n));
      const double dn1 = delta(t, lift_base_point(t, a, n + 1), lift_base_point(t, b, n + 1));
      CHECK(std::abs(dn1 - dn) <= std::ldexp(1.0, -n) + 1e-15);
    }
  }
}

TEST_CASE("metric axioms and monotone distances on sampled points") {
  const Tower t = build_guedj_tower();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 400; ++i) {
    const TruncatedPoint x = sample_truncated(t, 1, rng), y = sample_truncated(t, 1, rng),
                         z = sample_truncated(t, 1, rng);
    const double xy = delta(t, x, y), yx = delta(t, y, x), xz = delta(t, x, z), zy = delta(t, z, y);
    CHECK(xy == yx);
    CHECK(delta(t, x, x) == 0.0);
    CHECK(xy <= xz + zy + 1e-12);
    CHECK(t.dist(1, x.entries[1], y.entries[1]) >= t.dist(0, x.entries[0], y.entries[0]));
  }
}
