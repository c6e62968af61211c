#include <memory>

#include "merotower/tower.hpp"

namespace merotower {

namespace {

TowerLevel base_level(std::function<ProjPoint(std::mt19937_64&)> sampler) {
  TowerLevel lv;
  lv.index = 0;
  lv.kind = "P2";
  lv.metric = "fubini-study";
  lv.local_dist = [](const LevelPoint& a, const LevelPoint& b) {
    return fubini_study(std::get<ProjPoint>(a), std::get<ProjPoint>(b));
  };
  lv.sample = [sampler](std::mt19937_64& rng) { return LevelPoint(sampler(rng)); };
  lv.diam = 1.0;
  return lv;
}

}  // namespace

Tower identity_tower(const RationalMap& f, int depth, std::function<ProjPoint(std::mt19937_64&)> sampler) {
  if (depth < 0) throw TowerError("tower depth must be non-negative");
  if (f.dim() != 2) throw UnsupportedDimension("towers are implemented over P^2 only");
  if (!indeterminacy_locus(f).empty()) throw TowerError("identity towers need a holomorphic map");
  std::vector<TowerLevel> levels{base_level(sampler)};
  auto map = std::make_shared<RationalMap>(f);
  for (int n = 1; n <= depth; ++n) {
    TowerLevel lv = base_level(sampler);
    lv.index = n;
    lv.pi = [](const LevelPoint& x) { return x; };
    lv.s = [map](const LevelPoint& x) {
      auto y = map->evaluate(std::get<ProjPoint>(x));
      if (!y) throw TowerError("s_n hit a point where F vanishes numerically");
      return LevelPoint(*y);
    };
    lv.lift = [](const LevelPoint& x) { return std::optional<LevelPoint>(x); };
    lv.self_map = [map](const LevelPoint& x) -> std::optional<LevelPoint> {
      auto y = map->evaluate(std::get<ProjPoint>(x));
      if (!y) return std::nullopt;
      return LevelPoint(*y);
    };
    lv.diam = static_cast<double>(n + 1);
    levels.push_back(std::move(lv));
  }
  return Tower("identity", f, std::move(levels));
}

Tower resolved_tower(std::string name, const RationalMap& f, const Atlas& atlas, std::uint64_t diam_seed) {
  auto shared_atlas = std::make_shared<Atlas>(atlas);
  auto local = std::make_shared<std::map<std::string, std::array<Poly, 3>>>();
  for (const LocalMap& m : lift_map_through(atlas, f)) {
    if (!m.holomorphic) {
      throw TowerError("f o E is not holomorphic on chart " + m.chart + "; resolve further first");
    }
    (*local)[m.chart] = m.components;
  }
  auto metric = std::make_shared<SurfaceMetric>(atlas);

  std::vector<TowerLevel> levels{base_level(sample_p2)};
  TowerLevel lv;
  lv.index = 1;
  lv.kind = "blowup";
  lv.metric = "surface-chordal+directions";
  lv.pi = [shared_atlas](const LevelPoint& x) {
    return LevelPoint(blowdown(*shared_atlas, std::get<SurfPoint>(x)));
  };
  lv.s = [local](const LevelPoint& x) {
    const SurfPoint& p = std::get<SurfPoint>(x);
    const auto& comps = local->at(p.chart);
    std::vector<Complex> h(3);
    for (std::size_t i = 0; i < 3; ++i) h[i] = comps[i].evaluate(std::span<const Complex>(p.coords));
    return LevelPoint(ProjPoint(std::move(h)));
  };
  lv.local_dist = [metric](const LevelPoint& a, const LevelPoint& b) {
    return (*metric)(std::get<SurfPoint>(a), std::get<SurfPoint>(b));
  };
  lv.lift = [shared_atlas](const LevelPoint& x) -> std::optional<LevelPoint> {
    auto p = lift_point(*shared_atlas, std::get<ProjPoint>(x));
    if (!p) return std::nullopt;
    return LevelPoint(*p);
  };
  lv.sample = [shared_atlas](std::mt19937_64& rng) { return LevelPoint(sample_surface(*shared_atlas, rng)); };
  levels.push_back(std::move(lv));
  Tower t(std::move(name), f, std::move(levels));
  t.estimate_diameters(1, 4096, diam_seed);
  return t;
}

}  // namespace merotower
