#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "merotower/blowup.hpp"
#include "merotower/scenarios.hpp"
#include "merotower/tower.hpp"

using namespace merotower;
using namespace testing;

namespace {

std::string local(const Chart& c, std::size_t i) { return to_canonical(c.blowdown[i], c.vars); }
std::string in_vars(const std::array<std::string, 2>& v, const char* s) { return to_canonical(parse_poly(s, v), v); }

const LocalMap& on(const std::vector<LocalMap>& maps, const std::string& id) {
  for (const LocalMap& m : maps) {
    if (m.chart == id) return m;
  }
  FAIL("missing chart " << id);
  return maps.front();
}

std::string bracket(const std::array<std::string, 2>& v, const char* a, const char* b, const char* c) {
  return "[" + in_vars(v, a) + " : " + in_vars(v, b) + " : " + in_vars(v, c) + "]";
}

}  // namespace

TEST_CASE("blowing up P^2 at [0:1:0]") {
  const Atlas a = guedj_atlas();
  const Chart& al = a.chart("alpha=1");
  const Chart& be = a.chart("beta=1");
  CHECK(al.parent == "w=1");
  CHECK(al.vars == std::array<std::string, 2>{"z", "beta"});
  CHECK(local(al, 0) == in_vars(al.vars, "z"));
  CHECK(local(al, 1) == in_vars(al.vars, "z*beta"));
  CHECK(be.vars == std::array<std::string, 2>{"t", "alpha"});
  CHECK(local(be, 0) == in_vars(be.vars, "t*alpha"));
  CHECK(local(be, 1) == in_vars(be.vars, "t"));
  CHECK_FALSE(a.chart("w=1").leaf);
  CHECK(a.leaf_ids().size() == 4);
  CHECK_THROWS_AS(a.chart("nope"), ChartError);
  CHECK_THROWS_AS(a.blowup_at("nope", {Rational(0), Rational(0)}, {"a=1", "b"}, {"b=1", "a"}), ChartError);
  CHECK_THROWS_AS(Atlas::projective_plane().blowup_at(ProjPoint({0.3, 1.0, 0.0}), {"a=1", "b"}, {"b=1", "a"}),
                  ChartError);
}

TEST_CASE("exceptional points blow down to the centre") {
  const Atlas a = guedj_atlas();
  CHECK(same_point(blowdown(a, {"alpha=1", {0.0, Complex(0.4, 0.3)}}), exact(0, 1, 0)));
  CHECK(same_point(blowdown(a, {"beta=1", {0.0, Complex(-1.2, 0.1)}}), exact(0, 1, 0)));
  const auto eq = a.exceptional_equation(0, "alpha=1");
  REQUIRE(eq.has_value());
  CHECK(to_canonical(*eq, a.chart("alpha=1").vars) == in_vars(a.chart("alpha=1").vars, "z"));
  CHECK_FALSE(a.exceptional_equation(0, "t=1").has_value());
}

TEST_CASE("blow-down after lifting is the identity off the centre") {
  const Atlas a = guedj_double_atlas();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const ProjPoint x = sample_p2(rng);
    auto p = lift_point(a, x);
    if (!p) continue;
    CHECK(coordinate_gap(blowdown(a, *p), x) < 1e-10);
  }
  CHECK_FALSE(lift_point(a, exact(0, 1, 0)).has_value());
}

TEST_CASE("transitions are mutually inverse") {
  const Atlas a = guedj_double_atlas();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  for (const std::string& from : a.leaf_ids()) {
    for (int i = 0; i < 50; ++i) {
      const SurfPoint p{from, {Complex(u(rng), u(rng)), Complex(u(rng), u(rng))}};
      for (const SurfPoint& q : representations(a, p)) {
        if (q.chart == from) continue;
        const auto& back = a.transition(q.chart, from);
        auto x = back[0].evaluate(q.coords);
        auto y = back[1].evaluate(q.coords);
        if (!x || !y) continue;
        CHECK(std::abs(*x - p.coords[0]) < 1e-9 * (1 + std::abs(p.coords[0])));
        CHECK(std::abs(*y - p.coords[1]) < 1e-9 * (1 + std::abs(p.coords[1])));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("lifting the map through one blow-up") {
  const Atlas a = guedj_atlas();
  const auto lifted = lift_map_through(a, guedj());
  const LocalMap& al = on(lifted, "alpha=1");
  CHECK(to_canonical(al, a) == bracket({"z", "beta"}, "z", "beta + z*beta^2", "z*beta^2"));
  CHECK_FALSE(al.holomorphic);
  const LocalMap& be = on(lifted, "beta=1");
  CHECK(to_canonical(be, a) == bracket({"t", "alpha"}, "t*alpha^2", "1 + t", "t"));
  CHECK(be.holomorphic);
  const auto ind = find_indeterminacy_on_exceptional(lifted);
  REQUIRE(ind.size() == 1);
  CHECK(ind[0].chart == "alpha=1");
  CHECK(std::abs(ind[0].coords[0]) < 1e-12);
  CHECK(std::abs(ind[0].coords[1]) < 1e-12);
}

TEST_CASE("lifting through the second blow-up resolves the map") {
  const Atlas a = guedj_double_atlas();
  const auto lifted = lift_map_through(a, guedj());
  CHECK(to_canonical(on(lifted, "u=1"), a) == bracket({"z", "v"}, "1", "v + (z*v)^2", "(z*v)^2"));
  CHECK(to_canonical(on(lifted, "v=1"), a) == bracket({"beta", "u"}, "u", "1 + u*beta^2", "u*beta^2"));
  for (const LocalMap& m : lifted) CHECK(m.holomorphic);
  CHECK(find_indeterminacy_on_exceptional(lifted).empty());
  CHECK(find_indeterminacy_on_exceptional(lift_map_through(a, RationalMap::identity(2))).empty());
}

TEST_CASE("the lifted self-map on the exceptional curve") {
  const LiftedSelfMap g(guedj_atlas(), guedj());
  const std::array<std::string, 2> ta{"t", "alpha"};
  const auto& f = g.formula("beta=1", "beta=1");
  CHECK(f[0] == RatFunc(parse_poly("t", ta), parse_poly("1 + t", ta)));
  CHECK(f[1] == RatFunc(parse_poly("alpha^2", ta)));

  const SurfPoint q = g({"beta=1", {0.0, std::polar(1.0, 0.7)}});
  CHECK(q.chart == "beta=1");
  CHECK(std::abs(q.coords[0]) < 1e-12);
  CHECK(std::abs(q.coords[1] - std::polar(1.0, 1.4)) < 1e-12);
  const SurfPoint fixed = g({"beta=1", {0.0, 1.0}});
  CHECK(std::abs(fixed.coords[1] - Complex(1.0)) < 1e-12);
  CHECK_THROWS_AS(g({"alpha=1", {0.0, 0.0}}), NoLift);
}

TEST_CASE("the exceptional circle is invariant") {
  const LiftedSelfMap g(guedj_atlas(), guedj());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> th(0.0, 2 * M_PI);
  for (int i = 0; i < 500; ++i) {
    SurfPoint p{"beta=1", {0.0, std::polar(1.0, th(rng))}};
    for (int k = 0; k < 5; ++k) {
      p = g(p);
      REQUIRE(p.chart == "beta=1");
      CHECK(std::abs(p.coords[0]) < 1e-12);
      CHECK(std::abs(std::abs(p.coords[1]) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("the lifted map agrees across overlapping charts") {
  const Atlas a = guedj_atlas();
  const LiftedSelfMap g(a, guedj());
  const SurfaceMetric d(a);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int checked = 0;
  while (checked < 100) {
    const SurfPoint p{"beta=1", {Complex(u(rng), u(rng)) * 0.3, Complex(u(rng), u(rng))}};
    const auto reps = representations(a, p);
    if (reps.size() < 2) continue;
    const SurfPoint gp = g(reps[0]);
    for (std::size_t k = 1; k < reps.size(); ++k) CHECK(d(gp, g(reps[k])) < 1e-8);
    ++checked;
  }
}

TEST_CASE("surface metric") {
  const Atlas a = guedj_atlas();
  const SurfaceMetric d(a);
  const SurfPoint x{"beta=1", {0.0, std::polar(1.0, 0.3)}};
  const SurfPoint y{"beta=1", {0.0, std::polar(1.0, 2.0)}};
  CHECK(d(x, x) == 0.0);
  // Both points blow down to [0:1:0]; only the direction term remains, the
  // chord of the unit circle.
  CHECK(std::abs(d(x, y) - std::abs(x.coords[1] - y.coords[1])) < 1e-12);
  const SurfPoint far1{"t=1", {0.1, 0.2}};
  const SurfPoint far2{"t=1", {0.3, -0.2}};
  CHECK(std::abs(d(far1, far2) - fubini_study(blowdown(a, far1), blowdown(a, far2))) < 1e-12);
}
