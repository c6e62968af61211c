#include "merotower/entropy.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "merotower/systems.hpp"

namespace merotower {

std::size_t EntropyReport::count(int m, double epsilon) const {
  for (const EntropyRow& r : rows) {
    if (r.m == m && r.epsilon == epsilon) return r.count;
  }
  throw EntropyError("no row for m=" + std::to_string(m));
}

const SlopeFit& EntropyReport::fit(double epsilon) const {
  for (const SlopeFit& f : fits) {
    if (f.epsilon == epsilon) return f;
  }
  throw EntropyError("no fit for this epsilon");
}

SlopeFit fit_log_slope(std::span<const int> ms, std::span<const double> counts) {
  if (ms.size() != counts.size() || ms.size() < 2) throw EntropyError("slope fit needs >= 2 points");
  const double k = static_cast<double>(ms.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!(counts[i] > 0.0)) throw EntropyError("slope fit needs positive counts");
    mx += ms[i];
    my += std::log(counts[i]);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    sxx += (ms[i] - mx) * (ms[i] - mx);
    sxy += (ms[i] - mx) * (std::log(counts[i]) - my);
  }
  if (sxx == 0.0) throw EntropyError("slope fit needs distinct m values");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (ms.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double r = std::log(counts[i]) - (f.intercept + f.slope * ms[i]);
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / (k - 2.0) / sxx);
  }
  return f;
}

std::string to_csv(const EntropyReport& r) {
  std::string out = "m,epsilon,N,discards\n";
  char buf[128];
  for (const EntropyRow& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6g,%zu,%zu\n", row.m, row.epsilon, row.count, row.discards);
    out += buf;
  }
  return out;
}

System<Complex> circle_doubling() {
  System<Complex> sys;
  sys.name = "circle-doubling";
  sys.step = [](const Complex& a) -> std::optional<Complex> {
    const Complex b = a * a;
    return b / std::abs(b);
  };
  sys.distance = [](const Complex& a, const Complex& b) { return std::abs(a - b); };
  return sys;
}

std::vector<SurfaceState> surface_states(const LiftedSelfMap& g, std::span<const SurfPoint> points) {
  const SurfaceMetric metric(g.atlas());
  std::vector<SurfaceState> out;
  out.reserve(points.size());
  for (const SurfPoint& p : points) out.push_back({p, metric.embed(p)});
  return out;
}

System<SurfaceState> surface_system(std::shared_ptr<const LiftedSelfMap> g) {
  auto metric = std::make_shared<SurfaceMetric>(g->atlas());
  System<SurfaceState> sys;
  sys.name = "lifted-surface-map";
  sys.step = [g, metric](const SurfaceState& s) -> std::optional<SurfaceState> {
    try {
      const SurfPoint q = (*g)(s.point);
      return SurfaceState{q, metric->embed(q)};
    } catch (const NoLift&) {
      return std::nullopt;
    }
  };
  sys.distance = [](const SurfaceState& a, const SurfaceState& b) {
    return SurfaceMetric::distance(a.embedded, b.embedded);
  };
  return sys;
}

System<ProjPoint> map_system(const RationalMap& f) {
  auto map = std::make_shared<RationalMap>(f);
  auto locus = std::make_shared<std::vector<ProjPoint>>();
  if (f.dim() == 2) {
    for (const SetPoint& p : indeterminacy_locus(f).points) locus->push_back(p.point);
  }
  System<ProjPoint> sys;
  sys.name = "map";
  sys.step = [map, locus](const ProjPoint& x) -> std::optional<ProjPoint> {
    for (const ProjPoint& p : *locus) {
      if (fubini_study(p, x) <= 1e-9) return std::nullopt;
    }
    return map->evaluate(x);
  };
  sys.distance = [](const ProjPoint& a, const ProjPoint& b) { return fubini_study(a, b); };
  return sys;
}

System<TruncatedPoint> sigma_system(std::shared_ptr<const Tower> tower) {
  System<TruncatedPoint> sys;
  sys.name = "sigma:" + tower->name();
  sys.step = [tower](const TruncatedPoint& x) -> std::optional<TruncatedPoint> {
    if (x.depth() < 1) return std::nullopt;
    return sigma(*tower, x);
  };
  sys.distance = [tower](const TruncatedPoint& a, const TruncatedPoint& b) { return delta(*tower, a, b); };
  return sys;
}

std::vector<Complex> circle_grid(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0));
  const double phi = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI / static_cast<double>(n))(rng);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::polar(1.0, phi + 2.0 * M_PI * static_cast<double>(k) / n);
  // Angular order makes the greedy pass pack the circle in lattice steps.
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<ProjPoint> torus_samples(std::size_t n, std::uint64_t seed) {
  std::vector<ProjPoint> out;
  out.reserve(n);
  std::mt19937_64 rng(mix_seed(seed, 1));
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_torus(rng));
  return out;
}

std::vector<ProjPoint> p2_samples(std::size_t n, std::uint64_t seed) {
  std::vector<ProjPoint> out;
  out.reserve(n);
  std::mt19937_64 rng(mix_seed(seed, 2));
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_p2(rng));
  return out;
}

LiftCheckReport separated_lift_check(const Tower& t, std::span<const ProjPoint> base_set,
                                     const BowenParams& params, int level) {
  params.validate();
  if (level < 1 || level > t.depth()) throw TowerError("lift check level out of range");
  const System<ProjPoint> base = map_system(t.base_map());
  LiftCheckReport rep;
  rep.base_count = base_set.size();
  std::vector<std::vector<ProjPoint>> down;
  std::vector<std::vector<LevelPoint>> up;
  std::vector<std::size_t> ok_index;
  for (std::size_t i = 0; i < base_set.size(); ++i) {
    try {
      std::vector<ProjPoint> o = orbit(base, base_set[i], params.m);
      std::vector<LevelPoint> lifted;
      for (const ProjPoint& x : o) lifted.push_back(lift_base_point(t, x, level).entries.back());
      down.push_back(std::move(o));
      up.push_back(std::move(lifted));
      ok_index.push_back(i);
    } catch (const std::exception&) {
      ++rep.unliftable;
    }
  }
  rep.lifted_count = ok_index.size();
  for (std::size_t a = 0; a < ok_index.size(); ++a) {
    for (std::size_t b = a + 1; b < ok_index.size(); ++b) {
      const double d0 = bowen_distance(down[a], down[b], params.m,
                                       [](const ProjPoint& x, const ProjPoint& y) { return fubini_study(x, y); });
      double dn = 0.0;
      for (int l = 0; l < params.m; ++l) dn = std::max(dn, t.dist(level, up[a][l], up[b][l]));
      if (d0 > 0.0) rep.min_ratio = std::min(rep.min_ratio, dn / d0);
      if (dn < params.epsilon) rep.violations.emplace_back(ok_index[a], ok_index[b]);
    }
  }
  return rep;
}

}  // namespace merotower
