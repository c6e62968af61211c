#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "merotower/scenarios.hpp"
#include "merotower/systems.hpp"

using namespace merotower;
using namespace testing;

namespace {

Complex angle(double a) { return std::polar(1.0, a); }

/// Plain greedy pass with the Bowen distance recomputed from scratch for every
/// pair; no pivots, no index.
template <class Point>
std::vector<std::size_t> brute_greedy(const System<Point>& sys, const std::vector<Point>& pts, int m, double eps) {
  std::vector<std::vector<Point>> orbits;
  for (const Point& p : pts) orbits.push_back(orbit(sys, p, m));
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool ok = true;
    for (std::size_t j : kept) {
      double d = 0.0;
      for (int l = 0; l < m; ++l) d = std::max(d, sys.distance(orbits[i][l], orbits[j][l]));
      if (d < eps) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return kept;
}

template <class Point>
void check_monotone(const EntropyReport& r) {
  for (const EntropyRow& a : r.rows) {
    CHECK(a.count >= 1);
    for (const EntropyRow& b : r.rows) {
      if (a.epsilon == b.epsilon && a.m < b.m) CHECK(a.count <= b.count);
      if (a.m == b.m && a.epsilon < b.epsilon) CHECK(a.count >= b.count);
    }
  }
}

}  // namespace

TEST_CASE("Bowen distance on the doubling circle") {
  const System<Complex> c = circle_doubling();
  CHECK(bowen_dist(c, angle(0.3), angle(0.3), 5) == 0.0);
  CHECK(bowen_dist(c, angle(0.0), angle(0.5), 1) == std::abs(angle(0.0) - angle(0.5)));
  // Angles pi/4, pi/2, pi along the orbit; chords 2 sin(pi/8), sqrt 2, 2.
  CHECK(std::abs(bowen_dist(c, angle(0.0), angle(2 * M_PI / 8), 2) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(bowen_dist(c, angle(0.0), angle(2 * M_PI / 8), 3) - 2.0) < 1e-12);
  CHECK_THROWS_AS(bowen_dist(c, angle(0.0), angle(1.0), 0), EntropyError);
}

TEST_CASE("orbits through indeterminacy are reported with their step") {
  const System<ProjPoint> g = map_system(guedj());
  try {
    orbit(g, exact(0, 1, 0), 3);
    FAIL("expected OrbitUndefined");
  } catch (const OrbitUndefined& e) {
    CHECK(e.step() == 1);
  }
  CHECK_THROWS_AS(bowen_dist(g, exact(0, 1, 0), exact(1, 1, 1), 2), OrbitUndefined);
}

TEST_CASE("greedy separated sets: extremes") {
  const System<Complex> c = circle_doubling();
  const auto pts = circle_grid(500, 1);
  CHECK(greedy_separated_set(c, std::span<const Complex>(pts), {3, 2.5}).size() == 1);
  CHECK(greedy_separated_set(c, std::span<const Complex>(pts), {1, 1e-9}).size() == 500);
  const std::vector<Complex> none;
  CHECK_THROWS_AS(greedy_separated_set(c, std::span<const Complex>(none), {1, 0.1}), EntropyError);
}

TEST_CASE("greedy count agrees with an unpruned pairwise pass") {
  const System<Complex> c = circle_doubling();
  const auto pts = circle_grid(4096, 2);
  const auto fast = greedy_separated_set(c, std::span<const Complex>(pts), {8, 0.05});
  const auto slow = brute_greedy(c, pts, 8, 0.05);
  CHECK(std::abs(static_cast<double>(fast.size()) - static_cast<double>(slow.size())) <= 0.1 * slow.size());
  CHECK(fast.size() == slow.size());
}

TEST_CASE("greedy sets are separated and maximal") {
  const System<ProjPoint> s = map_system(squaring());
  const auto pts = torus_samples(1500, 4);
  const BowenParams params{3, 0.3};
  const auto orbits = compute_orbits(s, std::span<const ProjPoint>(pts), params.m);
  const auto kept = greedy_separated_indices(orbits, params, s.distance);
  std::vector<char> is_kept(pts.size(), 0);
  for (std::size_t i : kept) is_kept[i] = 1;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      CHECK(bowen_distance(orbits[kept[a]], orbits[kept[b]], params.m, s.distance) >= params.epsilon);
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (is_kept[i]) continue;
    bool covered = false;
    for (std::size_t k : kept) {
      if (bowen_distance(orbits[i], orbits[k], params.m, s.distance) < params.epsilon) {
        covered = true;
        break;
      }
    }
    CHECK(covered);
  }
}

TEST_CASE("slope fit recovers an injected growth rate") {
  std::vector<int> ms;
  std::vector<double> ns;
  for (int m = 3; m <= 10; ++m) {
    ms.push_back(m);
    ns.push_back(7.0 * std::ldexp(1.0, m));
  }
  const SlopeFit f = fit_log_slope(ms, ns);
  CHECK(std::abs(f.slope - std::log(2.0)) < 1e-9);
  CHECK(f.stderr_slope < 1e-9);
  CHECK_THROWS_AS(fit_log_slope(std::vector<int>{1}, std::vector<double>{1.0}), EntropyError);
}

TEST_CASE("exceptional circle entropy is close to log 2") {
  const EntropyReport r = guedj_circle_entropy(1 << 15, 2, 7, {0.05, 0.1, 0.2}, 1);
  CHECK_FALSE(r.saturated);
  int hits = 0;
  for (const SlopeFit& f : r.fits) hits += (f.slope >= 0.62 && f.slope <= 0.76) ? 1 : 0;
  CHECK(hits >= 2);
  check_monotone<SurfaceState>(r);
}

TEST_CASE("identity has zero entropy") {
  const auto pts = p2_samples(3000, 1);
  const EntropyReport r = entropy_report(map_system(RationalMap::identity(2)), std::span<const ProjPoint>(pts), 1, 5,
                                         {0.2, 0.3});
  for (const SlopeFit& f : r.fits) CHECK(std::abs(f.slope) <= 0.02);
  check_monotone<ProjPoint>(r);
}

TEST_CASE("torus squaring has entropy near 2 log 2") {
  const auto pts = torus_samples(16384, 1);
  const EntropyReport r = entropy_report(map_system(squaring()), std::span<const ProjPoint>(pts), 1, 4, {0.4});
  CHECK_FALSE(r.saturated);
  CHECK(std::abs(r.fits[0].slope - 2 * std::log(2.0)) <= 0.15);
  check_monotone<ProjPoint>(r);
}

TEST_CASE("saturation and input checks") {
  const auto few = circle_grid(40, 1);
  const EntropyReport r = entropy_report(circle_doubling(), std::span<const Complex>(few), 3, 6, {0.05});
  CHECK(r.saturated);
  CHECK(r.fits[0].saturated);
  CHECK_THROWS_AS(entropy_report(circle_doubling(), std::span<const Complex>(few), 1, 3, {0.1}), EntropyError);
  CHECK_THROWS_AS(entropy_report(circle_doubling(), std::span<const Complex>(few), 1, 4, {0.0}), EntropyError);
  CHECK(to_csv(r).rfind("m,epsilon,N,discards\n", 0) == 0);
}

TEST_CASE("orbits that stop early are discarded and counted") {
  std::vector<ProjPoint> pts = p2_samples(200, 3);
  pts.push_back(exact(0, 1, 0));
  const EntropyReport r = entropy_report(map_system(guedj()), std::span<const ProjPoint>(pts), 1, 4, {0.3});
  CHECK(r.discards >= 1);
  CHECK(r.admissible + r.discards == r.samples);
}

TEST_CASE("separated sets lift with their cardinality") {
  const auto pts = torus_samples(600, 9);
  const BowenParams params{3, 0.3};
  const auto set = greedy_separated_set(map_system(squaring()), std::span<const ProjPoint>(pts), params);
  const LiftCheckReport id = separated_lift_check(identity_tower(squaring(), 3), set, params, 3);
  CHECK(id.preserved());
  CHECK(id.min_ratio >= 1.0);

  // Points near the invariant circle |z| = 1, w = 0 of the base map.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0.0, 2 * M_PI), small(-0.05, 0.05);
  std::vector<ProjPoint> near;
  for (int i = 0; i < 400; ++i) near.push_back(ProjPoint({angle(th(rng)), Complex(small(rng), small(rng)), 1.0}));
  const Tower g = build_guedj_tower();
  const auto gset = greedy_separated_set(map_system(guedj()), std::span<const ProjPoint>(near), params);
  const LiftCheckReport gr = separated_lift_check(g, gset, params, 1);
  CHECK(gr.violations.empty());
  CHECK(gr.preserved());
  CHECK(gr.lifted_count >= gr.base_count);

  const std::vector<ProjPoint> one{exact(1, 1, 1)};
  CHECK(separated_lift_check(g, one, params, 1).preserved());
}
