#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "merotower/poly.hpp"

namespace merotower {

class UnsupportedDimension : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identification tolerance for points computed numerically.
inline constexpr double kPointTolerance = 1e-9;
/// Below this size (for a normalized input) all components count as zero.
inline constexpr double kIndeterminacyThreshold = 1e-12;

/// Point of P^k, normalized so the largest-modulus coordinate equals 1.
/// Optionally carries exact rational coordinates under the same normalization.
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(std::vector<Complex> coords);
  static ProjPoint exact(std::vector<Rational> coords);

  const std::vector<Complex>& coords() const { return coords_; }
  const std::optional<std::vector<Rational>>& exact_coords() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }
  std::size_t dim() const { return coords_.empty() ? 0 : coords_.size() - 1; }
  /// Index of the coordinate fixed to 1.
  std::size_t pivot() const { return pivot_; }

 private:
  std::vector<Complex> coords_;
  std::optional<std::vector<Rational>> exact_;
  std::size_t pivot_ = 0;
};

/// Largest coordinate difference after rescaling both points by the same pivot;
/// symmetric, and zero exactly for equal points.
double coordinate_gap(const ProjPoint& a, const ProjPoint& b);
bool same_point(const ProjPoint& a, const ProjPoint& b, double tol = kPointTolerance);
/// Chordal Fubini-Study distance: sine of the angle between the lines (diameter 1).
double fubini_study(const ProjPoint& a, const ProjPoint& b);

struct SetPoint {
  ProjPoint point;
  /// The point lies in the indeterminacy set and was kept conservatively.
  bool via_indeterminacy = false;
};

/// Finite set of points of P^2 plus a flag for positive-dimensional parts that
/// were detected but not enumerated.
struct AlgebraicPointSet {
  std::vector<SetPoint> points;
  bool has_positive_dimensional_part = false;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool contains(const ProjPoint& p, double tol = kPointTolerance) const;
  /// Inserts unless an equal point exists; flags are merged.
  void insert(const SetPoint& p, double tol = kPointTolerance);
};

/// Dominant rational self-map of P^k given by k+1 coprime homogeneous
/// components of equal degree.
class RationalMap {
 public:
  /// Cancels the common gcd and rescales to coprime integer coefficients.
  /// Throws AlgebraError on degree mismatch and DegenerateMap when all
  /// components vanish or the map is not dominant.
  explicit RationalMap(std::vector<HomoPoly> components);
  static RationalMap identity(std::size_t dim);

  std::size_t dim() const { return components_.size() - 1; }
  int degree() const { return degree_; }
  const std::vector<HomoPoly>& components() const { return components_; }
  bool operator==(const RationalMap& other) const { return components_ == other.components_; }

  /// nullopt when every component vanishes (below 1e-12) at the normalized point.
  std::optional<ProjPoint> evaluate(const ProjPoint& x) const;

 private:
  std::vector<HomoPoly> components_;
  int degree_ = 0;
};

/// Default coordinate names: z, w, t on P^2, x0..xk otherwise.
std::vector<std::string> default_variable_names(std::size_t dim);

/// (f o g): substitutes g into f and renormalizes.
RationalMap compose(const RationalMap& f, const RationalMap& g);
/// Algebraic degrees of f, f^2, ..., f^n_max after cancellation.
std::vector<std::int64_t> degree_sequence(const RationalMap& f, int n_max);
/// (deg f^n_max)^(1/n_max); exact when that degree is a perfect power.
double d1_estimate(const RationalMap& f, int n_max);

/// Common zeros of the components (surfaces only).
AlgebraicPointSet indeterminacy_locus(const RationalMap& f);
/// Points of the graph closure over `target`; indeterminacy points are kept
/// and flagged.
AlgebraicPointSet preimage_points(const RationalMap& f, const ProjPoint& target);

struct TopologicalDegreeReport {
  int degree = 0;
  int agreeing = 0;
  int trials = 0;
  std::vector<int> counts;
};

/// Generic fiber size from random rational targets; throws InconclusiveError
/// when no two trials agree.
TopologicalDegreeReport topological_degree(const RationalMap& f, int trials, std::uint64_t seed);

/// n-fold iterated preimage of a finite set.
AlgebraicPointSet backward_chain_set(const RationalMap& f, const AlgebraicPointSet& a, int n);

struct DisjointnessVerdict {
  enum class Kind { Holds, Fails, Undecided };
  Kind kind = Kind::Holds;
  /// Intersecting pairs (m, q), m < q.
  std::vector<std::pair<int, int>> pairs;
  /// The backward chain sets of I for m = 0..n_max.
  std::vector<AlgebraicPointSet> sets;
};

std::string to_string(DisjointnessVerdict::Kind kind);

DisjointnessVerdict disjointness_check(const RationalMap& f, int n_max);

/// Regular preimages of a non-rational target, continued from the preimages
/// of a nearby rational one. Internal to preimage_points; exposed for tests.
std::vector<ProjPoint> track_preimages(const RationalMap& f, const ProjPoint& target);

}  // namespace merotower
