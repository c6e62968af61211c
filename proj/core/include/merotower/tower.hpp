#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "merotower/blowup.hpp"
#include "merotower/rational_map.hpp"

namespace merotower {

class TowerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LevelPoint = std::variant<ProjPoint, SurfPoint>;

/// One floor X_n of a tower with its maps down to X_{n-1}.
struct TowerLevel {
  int index = 0;
  std::string kind;    // "P2" or "blowup"
  std::string metric;  // tag written to descriptors
  std::function<LevelPoint(const LevelPoint&)> pi;
  std::function<LevelPoint(const LevelPoint&)> s;
  /// dist'_n; the tower adds the projected distance of the floor below.
  std::function<double(const LevelPoint&, const LevelPoint&)> local_dist;
  /// The single point of X_n over a point of X_{n-1}; nullopt over a curve.
  std::function<std::optional<LevelPoint>(const LevelPoint&)> lift;
  /// F_n where known; returns nullopt at indeterminacy. May be empty.
  std::function<std::optional<LevelPoint>(const LevelPoint&)> self_map;
  std::function<LevelPoint(std::mt19937_64&)> sample;
  double diam = 1.0;
};

/// Finite compatible sequence (x_0, ..., x_N) with pi_n(x_n) = x_{n-1}.
struct TruncatedPoint {
  std::vector<LevelPoint> entries;
  int depth() const { return static_cast<int>(entries.size()) - 1; }
};

class Tower {
 public:
  /// levels[0] is X_0 = P^2 with F_0 = base.
  Tower(std::string name, RationalMap base, std::vector<TowerLevel> levels);

  const std::string& name() const { return name_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const TowerLevel& level(int n) const;
  const RationalMap& base_map() const { return base_; }

  /// dist_n(x, y) = dist'_n(x, y) + dist_{n-1}(pi x, pi y).
  double dist(int n, const LevelPoint& x, const LevelPoint& y) const;
  /// Replaces diam_n for n >= first by the largest dist_n over random pairs.
  void estimate_diameters(int first, int pairs, std::uint64_t seed);

 private:
  std::string name_;
  RationalMap base_;
  std::vector<TowerLevel> levels_;
};

/// Tolerance of the compatibility condition pi_n(x_n) = x_{n-1}.
inline constexpr double kCompatibilityTolerance = 1e-10;

/// Throws TowerError when the entries are not compatible.
void check_compatible(const Tower& t, const TruncatedPoint& x, double tol = kCompatibilityTolerance);

/// sum_{n<=N} dist_n(x_n, y_n) / (2^n diam_n). The omitted tail is at most 2^-N.
/// Uses the entries themselves at every level, so compatibility is assumed.
double delta(const Tower& t, const TruncatedPoint& x, const TruncatedPoint& y);
/// Same sum with every term reported.
std::vector<double> delta_terms(const Tower& t, const TruncatedPoint& x, const TruncatedPoint& y);

/// (s_1(x_1), ..., s_N(x_N)), depth N-1. Depth 0 is rejected: extending by
/// F_0 would be wrong over the indeterminacy set.
TruncatedPoint sigma(const Tower& t, const TruncatedPoint& x);

/// Lifts level by level. `hints[n-1]`, when present, is used at level n if
/// the fibre is a curve; it must project to the entry below.
TruncatedPoint lift_base_point(const Tower& t, const ProjPoint& x0, int depth,
                               std::span<const std::optional<LevelPoint>> hints = {});

/// Samples a top-level point and projects it down.
TruncatedPoint sample_truncated(const Tower& t, int depth, std::mt19937_64& rng);

struct Lemma4Entry {
  int p = 0;
  int l = 0;
  double max_discrepancy = 0.0;
  int samples = 0;
  int resampled = 0;
};

struct Lemma4Report {
  std::vector<Lemma4Entry> entries;
  double max_discrepancy = 0.0;
  int resampled = 0;
};

/// Compares F_p^l o pi_{p+1} o ... o pi_{p+l} with s_{p+1} o ... o s_{p+l} on
/// sampled points of X_{p+l}, for every (p, l) where F_p is known.
Lemma4Report lemma4_check(const Tower& t, int samples, std::uint64_t seed);

struct ContinuityCounterexample {
  TruncatedPoint x;
  TruncatedPoint y;
  double delta_before = 0.0;
  double delta_after = 0.0;
};

struct ContinuityReport {
  double epsilon = 0.0;
  /// Largest eta = 2^-k (k = 0..40) passing on every sampled pair; 0 if none.
  double eta = 0.0;
  int pairs = 0;
  int skipped = 0;
  std::optional<ContinuityCounterexample> counterexample;
};

/// Empirical modulus of continuity of sigma at depth `depth` from perturbed
/// base points at scales 10^-1 .. 10^-8.
ContinuityReport continuity_probe(const Tower& t, double epsilon, int samples, std::uint64_t seed,
                                  int depth = -1);

/// Uniform sample of P^2: random affine chart, coordinates in the unit polydisc.
ProjPoint sample_p2(std::mt19937_64& rng);
/// Uniform point of the torus |z| = |w| = |t| = 1.
ProjPoint sample_torus(std::mt19937_64& rng);

/// pi_n = id and s_n = F_n = F at every level. F must be holomorphic.
/// dist_n = (n+1) * Fubini-Study and diam_n = n + 1 exactly.
Tower identity_tower(const RationalMap& f, int depth,
                     std::function<ProjPoint(std::mt19937_64&)> sampler = sample_p2);

/// Depth-1 tower X_1 -> P^2 given by an atlas on which f o E is holomorphic:
/// pi_1 = E and s_1 = f o E. diam_1 is estimated from 4096 seeded pairs.
Tower resolved_tower(std::string name, const RationalMap& f, const Atlas& atlas,
                     std::uint64_t diam_seed = 1);

/// A chart-box sample of a blown-up surface (random leaf chart, coordinates in
/// the disc of the chart radius), moved to its canonical chart.
SurfPoint sample_surface(const Atlas& atlas, std::mt19937_64& rng);

}  // namespace merotower
