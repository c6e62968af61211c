#include "merotower/tower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "merotower/parallel.hpp"

namespace merotower {

Tower::Tower(std::string name, RationalMap base, std::vector<TowerLevel> levels)
    : name_(std::move(name)), base_(std::move(base)), levels_(std::move(levels)) {
  if (levels_.empty()) throw TowerError("a tower needs at least the base level");
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    const TowerLevel& lv = levels_[n];
    if (lv.index != static_cast<int>(n)) throw TowerError("level indices must be 0, 1, 2, ...");
    if (!lv.local_dist || !lv.sample) throw TowerError("level " + std::to_string(n) + " is incomplete");
    if (n > 0 && (!lv.pi || !lv.s || !lv.lift)) {
      throw TowerError("level " + std::to_string(n) + " lacks pi, s or lift");
    }
    if (!(lv.diam > 0.0)) throw TowerError("level diameters must be positive");
  }
  if (levels_[0].diam < 1.0) throw TowerError("the base diameter is normalized to at least 1");
}

const TowerLevel& Tower::level(int n) const {
  if (n < 0 || n > depth()) throw TowerError("no level " + std::to_string(n));
  return levels_[n];
}

double Tower::dist(int n, const LevelPoint& x, const LevelPoint& y) const {
  const TowerLevel& lv = level(n);
  double d = lv.local_dist(x, y);
  if (n > 0) d += dist(n - 1, lv.pi(x), lv.pi(y));
  return d;
}

void Tower::estimate_diameters(int first, int pairs, std::uint64_t seed) {
  for (int n = std::max(first, 1); n <= depth(); ++n) {
    std::vector<double> best(pairs, 0.0);
    parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t i) {
      std::mt19937_64 rng(mix_seed(seed + static_cast<std::uint64_t>(n), i));
      const LevelPoint a = levels_[n].sample(rng);
      const LevelPoint b = levels_[n].sample(rng);
      best[i] = dist(n, a, b);
    });
    levels_[n].diam = std::max(1e-12, *std::max_element(best.begin(), best.end()));
  }
}

void check_compatible(const Tower& t, const TruncatedPoint& x, double tol) {
  if (x.depth() > t.depth()) throw TowerError("point deeper than the tower");
  for (int n = 1; n <= x.depth(); ++n) {
    const LevelPoint down = t.level(n).pi(x.entries[n]);
    const double gap = t.dist(n - 1, down, x.entries[n - 1]);
    if (gap > tol) {
      throw TowerError("compatibility violated at level " + std::to_string(n) + " (gap " +
                       std::to_string(gap) + ")");
    }
  }
}

std::vector<double> delta_terms(const Tower& t, const TruncatedPoint& x, const TruncatedPoint& y) {
  if (x.depth() != y.depth()) throw TowerError("delta needs points of equal depth");
  if (x.depth() < 0) throw TowerError("empty truncated point");
  std::vector<double> terms;
  double below = 0.0;
  double weight = 1.0;
  for (int n = 0; n <= x.depth(); ++n) {
    const TowerLevel& lv = t.level(n);
    const double d = lv.local_dist(x.entries[n], y.entries[n]) + below;
    terms.push_back(d / (weight * lv.diam));
    below = d;
    weight *= 2.0;
  }
  return terms;
}

double delta(const Tower& t, const TruncatedPoint& x, const TruncatedPoint& y) {
  if (x.depth() != y.depth()) throw TowerError("delta needs points of equal depth");
  double sum = 0.0;
  double below = 0.0;
  double weight = 1.0;
  for (int n = 0; n <= x.depth(); ++n) {
    const TowerLevel& lv = t.level(n);
    below += lv.local_dist(x.entries[n], y.entries[n]);
    sum += below / (weight * lv.diam);
    weight *= 2.0;
  }
  return sum;
}

TruncatedPoint sigma(const Tower& t, const TruncatedPoint& x) {
  if (x.depth() < 1) throw TowerError("sigma needs depth >= 1");
  TruncatedPoint out;
  for (int n = 1; n <= x.depth(); ++n) out.entries.push_back(t.level(n).s(x.entries[n]));
  check_compatible(t, out, 1e-8);
  return out;
}

TruncatedPoint lift_base_point(const Tower& t, const ProjPoint& x0, int depth,
                               std::span<const std::optional<LevelPoint>> hints) {
  if (depth < 0 || depth > t.depth()) throw TowerError("lift depth out of range");
  TruncatedPoint out;
  out.entries.emplace_back(x0);
  for (int n = 1; n <= depth; ++n) {
    const TowerLevel& lv = t.level(n);
    std::optional<LevelPoint> up = lv.lift(out.entries.back());
    if (!up) {
      const std::size_t h = static_cast<std::size_t>(n - 1);
      if (h >= hints.size() || !hints[h]) {
        throw TowerError("fibre of pi_" + std::to_string(n) + " over the point is a curve; a hint is needed");
      }
      up = *hints[h];
      if (t.dist(n - 1, lv.pi(*up), out.entries.back()) > 1e-8) {
        throw TowerError("hint at level " + std::to_string(n) + " does not project to the point below");
      }
    }
    out.entries.push_back(std::move(*up));
  }
  return out;
}

TruncatedPoint sample_truncated(const Tower& t, int depth, std::mt19937_64& rng) {
  TruncatedPoint out;
  out.entries.resize(depth + 1);
  out.entries[depth] = t.level(depth).sample(rng);
  for (int n = depth; n >= 1; --n) out.entries[n - 1] = t.level(n).pi(out.entries[n]);
  return out;
}

namespace {

std::optional<LevelPoint> apply_self_map(const Tower& t, int p, const LevelPoint& x) {
  if (p == 0) {
    auto y = t.base_map().evaluate(std::get<ProjPoint>(x));
    if (!y) return std::nullopt;
    return LevelPoint(*y);
  }
  return t.level(p).self_map(x);
}

}  // namespace

Lemma4Report lemma4_check(const Tower& t, int samples, std::uint64_t seed) {
  if (t.depth() < 1) throw TowerError("lemma4_check needs a tower of depth >= 1");
  Lemma4Report report;
  std::uint64_t stream = 0;
  for (int p = 0; p < t.depth(); ++p) {
    if (p > 0 && !t.level(p).self_map) continue;
    for (int l = 1; p + l <= t.depth(); ++l) {
      Lemma4Entry e{p, l, 0.0, 0, 0};
      std::vector<double> gaps(samples, 0.0);
      std::vector<int> retries(samples, 0);
      const std::uint64_t s = stream++;
      parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(mix_seed(seed, s), i));
        for (int attempt = 0; attempt < 1000; ++attempt) {
          const LevelPoint top = t.level(p + l).sample(rng);
          LevelPoint lhs = top;
          for (int k = p + l; k > p; --k) lhs = t.level(k).pi(lhs);
          bool defined = true;
          for (int k = 0; k < l && defined; ++k) {
            auto next = apply_self_map(t, p, lhs);
            if (next) {
              lhs = *next;
            } else {
              defined = false;
            }
          }
          if (!defined) {
            ++retries[i];
            continue;
          }
          LevelPoint rhs = top;
          for (int k = p + l; k > p; --k) rhs = t.level(k).s(rhs);
          gaps[i] = t.dist(p, lhs, rhs);
          return;
        }
        throw TowerError("lemma4_check: every resample hit indeterminacy");
      });
      e.samples = samples;
      for (int i = 0; i < samples; ++i) {
        e.max_discrepancy = std::max(e.max_discrepancy, gaps[i]);
        e.resampled += retries[i];
      }
      report.max_discrepancy = std::max(report.max_discrepancy, e.max_discrepancy);
      report.resampled += e.resampled;
      report.entries.push_back(e);
    }
  }
  return report;
}

ContinuityReport continuity_probe(const Tower& t, double epsilon, int samples, std::uint64_t seed,
                                  int depth) {
  if (!(epsilon > 0.0)) throw TowerError("continuity probe needs epsilon > 0");
  if (depth < 0) depth = t.depth();
  if (depth < 1) throw TowerError("continuity probe needs depth >= 1");
  struct PairResult {
    bool ok = false;
    TruncatedPoint x;
    TruncatedPoint y;
    double before = 0.0;
    double after = 0.0;
  };
  std::vector<PairResult> results(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = std::pow(10.0, -static_cast<double>(1 + i % 8));
    try {
      const ProjPoint x0 = std::get<ProjPoint>(t.level(0).sample(rng));
      std::vector<Complex> c = x0.coords();
      for (auto& v : c) v += scale * Complex(unit(rng), unit(rng));
      PairResult r;
      r.x = lift_base_point(t, x0, depth);
      r.y = lift_base_point(t, ProjPoint(c), depth);
      r.before = delta(t, r.x, r.y);
      r.after = delta(t, sigma(t, r.x), sigma(t, r.y));
      r.ok = true;
      results[i] = std::move(r);
    } catch (const std::exception&) {
      // Over a blow-up centre or an indeterminacy point: skipped and counted.
    }
  });
  ContinuityReport report;
  report.epsilon = epsilon;
  double worst = std::numeric_limits<double>::infinity();
  for (PairResult& r : results) {
    if (!r.ok) {
      ++report.skipped;
      continue;
    }
    ++report.pairs;
    if (r.after >= epsilon && r.before < worst) {
      worst = r.before;
      report.counterexample = ContinuityCounterexample{r.x, r.y, r.before, r.after};
    }
  }
  for (int k = 0; k <= 40; ++k) {
    const double eta = std::ldexp(1.0, -k);
    if (eta <= worst) {
      report.eta = eta;
      break;
    }
  }
  return report;
}

ProjPoint sample_p2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> chart(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int fixed = chart(rng);
  std::vector<Complex> c(3);
  for (int i = 0; i < 3; ++i) {
    if (i == fixed) {
      c[i] = 1.0;
    } else {
      const double r = std::sqrt(unit(rng));
      c[i] = std::polar(r, 2.0 * M_PI * unit(rng));
    }
  }
  return ProjPoint(std::move(c));
}

ProjPoint sample_torus(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double a = angle(rng);
  const double b = angle(rng);
  return ProjPoint({std::polar(1.0, a), std::polar(1.0, b), Complex(1.0, 0.0)});
}

SurfPoint sample_surface(const Atlas& atlas, std::mt19937_64& rng) {
  const auto ids = atlas.leaf_ids();
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SurfPoint p;
  p.chart = ids[pick(rng)];
  for (auto& c : p.coords) c = std::polar(kChartRadius * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng));
  return canonical_chart(atlas, p);
}

}  // namespace merotower
