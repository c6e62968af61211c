#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "merotower/parallel.hpp"

namespace merotower {

class OrbitUndefined : public std::runtime_error {
 public:
  OrbitUndefined(int step, const std::string& what) : std::runtime_error(what), step_(step) {}
  /// Orbit index l at which the next iterate is undefined.
  int step() const { return step_; }

 private:
  int step_;
};

class EntropyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BowenParams {
  int m = 1;
  double epsilon = 0.1;

  void validate() const {
    if (m < 1) throw EntropyError("orbit length m must be >= 1");
    if (!(epsilon > 0.0)) throw EntropyError("epsilon must be > 0");
  }
};

/// A map with a distance. `step` returns nullopt where the orbit stops
/// (indeterminacy, or too close to it).
template <class Point>
struct System {
  std::string name;
  std::function<std::optional<Point>(const Point&)> step;
  std::function<double(const Point&, const Point&)> distance;
};

/// x, F x, ..., F^{m-1} x. Throws OrbitUndefined when F^l x is undefined.
template <class Point>
std::vector<Point> orbit(const System<Point>& sys, const Point& x, int m) {
  std::vector<Point> out{x};
  out.reserve(m);
  for (int l = 1; l < m; ++l) {
    auto next = sys.step(out.back());
    if (!next) throw OrbitUndefined(l, sys.name + ": orbit undefined at step " + std::to_string(l));
    out.push_back(std::move(*next));
  }
  return out;
}

/// Bowen distance over precomputed orbits (both of length >= m).
template <class Point, class Dist>
double bowen_distance(const std::vector<Point>& a, const std::vector<Point>& b, int m, Dist&& dist) {
  double d = 0.0;
  for (int l = 0; l < m; ++l) d = std::max(d, dist(a[l], b[l]));
  return d;
}

/// max_{0<=l<m} dist(F^l x, F^l y).
template <class Point>
double bowen_dist(const System<Point>& sys, const Point& x, const Point& y, int m) {
  BowenParams{m, 1.0}.validate();
  return bowen_distance(orbit(sys, x, m), orbit(sys, y, m), m, sys.distance);
}

/// Orbits of every sample up to length m_max; shorter where they stop.
template <class Point>
std::vector<std::vector<Point>> compute_orbits(const System<Point>& sys, std::span<const Point> samples,
                                               int m_max) {
  std::vector<std::vector<Point>> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    std::vector<Point>& o = out[i];
    o.push_back(samples[i]);
    while (static_cast<int>(o.size()) < m_max) {
      std::optional<Point> next;
      try {
        next = sys.step(o.back());
      } catch (const std::exception&) {
        next.reset();
      }
      if (!next) break;
      o.push_back(std::move(*next));
    }
  });
  return out;
}

/// Greedy (m, eps)-separated subset of precomputed orbits, in index order,
/// starting from `seed` (already (m, eps)-separated; assumed, not checked).
/// Candidates are pruned with pivots in the l = 0 distance, which is a lower
/// bound of the Bowen distance.
template <class Point, class Dist>
std::vector<std::size_t> greedy_separated_indices(const std::vector<std::vector<Point>>& orbits,
                                                  const BowenParams& params, Dist&& dist,
                                                  std::span<const std::size_t> seed = {}) {
  params.validate();
  const int m = params.m;
  const double eps = params.epsilon;
  std::vector<std::size_t> admissible;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (static_cast<int>(orbits[i].size()) >= m) admissible.push_back(i);
  }
  if (admissible.empty()) throw EntropyError("no admissible samples (every orbit stops early)");

  // Up to three pivots, spread out greedily.
  std::vector<std::size_t> pivots{admissible.front()};
  const std::size_t scan = std::min<std::size_t>(admissible.size(), 512);
  while (pivots.size() < 3) {
    std::size_t best = admissible.front();
    double best_d = -1.0;
    for (std::size_t k = 0; k < scan; ++k) {
      double dmin = INFINITY;
      for (std::size_t p : pivots) dmin = std::min(dmin, dist(orbits[admissible[k]][0], orbits[p][0]));
      if (dmin > best_d) {
        best_d = dmin;
        best = admissible[k];
      }
    }
    if (best_d <= 0.0) break;
    pivots.push_back(best);
  }
  auto pivot_dists = [&](std::size_t i) {
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < pivots.size(); ++k) d[k] = dist(orbits[i][0], orbits[pivots[k]][0]);
    return d;
  };

  std::vector<std::size_t> kept;
  std::multimap<double, std::pair<std::size_t, std::array<double, 3>>> index;
  std::vector<char> taken(orbits.size(), 0);
  auto keep = [&](std::size_t i) {
    const auto pd = pivot_dists(i);
    index.emplace(pd[0], std::make_pair(i, pd));
    kept.push_back(i);
    taken[i] = 1;
  };
  for (std::size_t i : seed) {
    if (static_cast<int>(orbits.at(i).size()) < m) throw EntropyError("seed point is not admissible");
    keep(i);
  }
  for (std::size_t i : admissible) {
    if (taken[i]) continue;
    const auto pd = pivot_dists(i);
    bool close = false;
    for (auto it = index.lower_bound(pd[0] - eps); it != index.end() && it->first <= pd[0] + eps; ++it) {
      const auto& [j, qd] = it->second;
      bool maybe = true;
      for (std::size_t k = 1; k < pivots.size(); ++k) {
        if (std::abs(pd[k] - qd[k]) >= eps) {
          maybe = false;
          break;
        }
      }
      if (!maybe) continue;
      bool within = true;
      for (int l = 0; l < m; ++l) {
        if (dist(orbits[i][l], orbits[j][l]) >= eps) {
          within = false;
          break;
        }
      }
      if (within) {
        close = true;
        break;
      }
    }
    if (!close) keep(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

/// Greedy separated subset of samples: a point is kept iff its Bowen distance
/// to every kept point is >= eps. Samples whose orbit stops early are skipped.
template <class Point>
std::vector<Point> greedy_separated_set(const System<Point>& sys, std::span<const Point> samples,
                                        const BowenParams& params) {
  const auto orbits = compute_orbits(sys, samples, params.m);
  std::vector<Point> out;
  for (std::size_t i : greedy_separated_indices(orbits, params, sys.distance)) out.push_back(samples[i]);
  return out;
}

struct EntropyRow {
  int m = 0;
  double epsilon = 0.0;
  std::size_t count = 0;
  std::size_t discards = 0;
};

struct SlopeFit {
  double epsilon = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  bool saturated = false;
};

struct EntropyReport {
  std::string system;
  std::size_t samples = 0;
  std::size_t admissible = 0;
  std::size_t discards = 0;
  int m_lo = 0;
  int m_hi = 0;
  std::vector<EntropyRow> rows;
  std::vector<SlopeFit> fits;
  /// Some N(m_hi, eps) reached half the admissible sample.
  bool saturated = false;

  std::size_t count(int m, double epsilon) const;
  const SlopeFit& fit(double epsilon) const;
};

/// Least-squares fit of log n against m.
SlopeFit fit_log_slope(std::span<const int> ms, std::span<const double> counts);

/// N(m, eps) over m_lo..m_hi for every eps, with nested reuse: each set is
/// grown from the larger of S(m-1, eps) and S(m, eps') (eps' the next larger
/// radius), so N is monotone in both arguments. Samples whose orbit stops
/// before m_hi are discarded for every row.
template <class Point>
EntropyReport entropy_report(const System<Point>& sys, std::span<const Point> samples, int m_lo, int m_hi,
                             std::vector<double> epsilons) {
  if (m_lo < 1 || m_hi - m_lo + 1 < 4) throw EntropyError("m range must span at least 4 values, m >= 1");
  if (epsilons.empty()) throw EntropyError("need at least one epsilon");
  if (samples.empty()) throw EntropyError("empty sample");
  for (double e : epsilons) BowenParams{1, e}.validate();
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());

  auto orbits = compute_orbits(sys, samples, m_hi);
  EntropyReport rep;
  rep.system = sys.name;
  rep.samples = samples.size();
  rep.m_lo = m_lo;
  rep.m_hi = m_hi;
  for (auto& o : orbits) {
    if (static_cast<int>(o.size()) < m_hi) {
      o.clear();
      ++rep.discards;
    }
  }
  rep.admissible = rep.samples - rep.discards;
  if (rep.admissible == 0) throw EntropyError("no admissible samples (every orbit stops early)");

  std::vector<std::vector<std::size_t>> prev_eps;  // S(m, eps') per m
  for (double eps : epsilons) {
    std::vector<std::vector<std::size_t>> cur;
    std::vector<std::size_t> prev_m;
    for (int m = m_lo; m <= m_hi; ++m) {
      std::span<const std::size_t> seed;
      const std::vector<std::size_t>* from_eps = prev_eps.empty() ? nullptr : &prev_eps[m - m_lo];
      if (from_eps && from_eps->size() > prev_m.size()) {
        seed = *from_eps;
      } else {
        seed = prev_m;
      }
      auto kept = greedy_separated_indices(orbits, BowenParams{m, eps}, sys.distance, seed);
      rep.rows.push_back({m, eps, kept.size(), rep.discards});
      prev_m = kept;
      cur.push_back(std::move(kept));
    }
    std::vector<int> ms;
    std::vector<double> ns;
    for (int m = m_lo; m <= m_hi; ++m) {
      ms.push_back(m);
      ns.push_back(static_cast<double>(cur[m - m_lo].size()));
    }
    SlopeFit f = fit_log_slope(ms, ns);
    f.epsilon = eps;
    f.saturated = 2 * cur.back().size() >= rep.admissible;
    rep.saturated = rep.saturated || f.saturated;
    rep.fits.push_back(f);
    prev_eps = std::move(cur);
  }
  return rep;
}

/// Slope for a single eps (a lower-bound estimate of the entropy).
template <class Point>
SlopeFit entropy_rate(const System<Point>& sys, std::span<const Point> samples, int m_lo, int m_hi,
                      double epsilon) {
  return entropy_report(sys, samples, m_lo, m_hi, {epsilon}).fits.front();
}

/// CSV with header `m,epsilon,N,discards`.
std::string to_csv(const EntropyReport& r);

}  // namespace merotower
