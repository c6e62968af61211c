#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "merotower/ratfunc.hpp"
#include "merotower/rational_map.hpp"

namespace merotower {

class NoLift : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local coordinates are trusted up to this modulus.
inline constexpr double kChartRadius = 2.0;

struct Chart {
  std::string id;
  /// Chart that was blown up; empty for the three affine charts of P^2.
  std::string parent;
  std::array<std::string, 2> vars;
  /// Parent-chart coordinates as polynomials in the local variables.
  /// For a base chart: the homogeneous coordinates [z:w:t] (three entries).
  std::vector<Poly> blowdown;
  /// Composite blow-down to homogeneous coordinates of P^2.
  std::array<Poly, 3> to_p2;
  /// Local coordinates as functions of the homogeneous coordinates (Z, W, T).
  std::array<RatFunc, 2> from_p2;
  bool leaf = true;
};

struct Blowup {
  std::string parent;
  std::array<Rational, 2> center;
  std::array<std::string, 2> children;
};

/// Point of a blown-up surface: chart id and two local coordinates.
struct SurfPoint {
  std::string chart;
  std::array<Complex, 2> coords;
};

/// Charts of P^2 and of successive point blow-ups. Non-leaf charts stay in
/// the atlas so that nested blow-ups can refer to them.
class Atlas {
 public:
  /// The affine charts z=1, w=1, t=1.
  static Atlas projective_plane();

  const std::vector<Chart>& charts() const { return charts_; }
  const std::vector<Blowup>& blowups() const { return blowups_; }
  const Chart& chart(const std::string& id) const;
  bool has_chart(const std::string& id) const;
  std::vector<std::string> leaf_ids() const;

  /// Blows up the point `center` of a leaf chart with coordinates (x, y).
  /// New charts: `first` with variables (x, s), blow-down (x, c2 + (x - c1) s);
  /// `second` with variables (y, r), blow-down (c1 + (y - c2) r, y).
  Atlas blowup_at(const std::string& chart_id, const std::array<Rational, 2>& center,
                  const std::array<std::string, 2>& first,
                  const std::array<std::string, 2>& second) const;
  /// Same, for a point of P^2 given exactly; picks the base chart where it
  /// has the smallest coordinates.
  Atlas blowup_at(const ProjPoint& p, const std::array<std::string, 2>& first,
                  const std::array<std::string, 2>& second) const;

  /// Transition from chart `from` to chart `to`, as rational functions of the
  /// local variables of `from`.
  const std::array<RatFunc, 2>& transition(const std::string& from, const std::string& to) const;
  /// Local equation of the total transform of blow-up `index`'s centre in a
  /// chart; nullopt when the chart does not lie above that blow-up.
  std::optional<Poly> exceptional_equation(std::size_t index, const std::string& chart_id) const;

  /// Images in P^2 of all blow-up centres.
  std::vector<ProjPoint> center_images() const;

 private:
  std::vector<Chart> charts_;
  std::vector<Blowup> blowups_;
  std::map<std::pair<std::string, std::string>, std::array<RatFunc, 2>> transitions_;

  void rebuild_transitions();
};

/// Homogeneous image of a surface point.
ProjPoint blowdown(const Atlas& atlas, const SurfPoint& p);
/// All leaf charts in which the point is representable within the chart radius.
std::vector<SurfPoint> representations(const Atlas& atlas, const SurfPoint& p);
/// Moves the point to the leaf chart with the smallest max-modulus coordinate;
/// ties within 1e-9 keep the current chart.
SurfPoint canonical_chart(const Atlas& atlas, const SurfPoint& p);
/// The unique point over x, or nullopt when x is a blow-up centre image.
std::optional<SurfPoint> lift_point(const Atlas& atlas, const ProjPoint& x);

/// f composed with a chart's blow-down, common factors cancelled.
struct LocalMap {
  std::string chart;
  std::array<Poly, 3> components;
  bool holomorphic = true;
  /// Common zeros inside the chart radius.
  std::vector<SurfPoint> indeterminacy;
  bool positive_dimensional = false;
};

std::vector<LocalMap> lift_map_through(const Atlas& atlas, const RationalMap& f);
/// Remaining indeterminacy points of all leaf-chart lifts.
std::vector<SurfPoint> find_indeterminacy_on_exceptional(const std::vector<LocalMap>& lifted);

/// `[c0 : c1 : c2]` in canonical polynomial strings.
std::string to_canonical(const LocalMap& m, const Atlas& atlas);

/// The self-map E^-1 o f o E of the blown-up surface, chart by chart.
class LiftedSelfMap {
 public:
  LiftedSelfMap(Atlas atlas, const RationalMap& f);

  const Atlas& atlas() const { return atlas_; }
  /// Chart-to-chart formula (local variables of `from`).
  const std::array<RatFunc, 2>& formula(const std::string& from, const std::string& to) const;
  /// Throws NoLift when no leaf chart receives the image.
  SurfPoint operator()(const SurfPoint& p) const;

 private:
  Atlas atlas_;
  std::map<std::pair<std::string, std::string>, std::array<RatFunc, 2>> formulas_;
};

/// Distance on a blown-up surface: chordal distance of the images in P^2 plus,
/// for each blow-up, the Riemann-sphere distance between directions at the
/// centre, faded out by a cutoff of radius 1/2 to 1 in parent coordinates.
class SurfaceMetric {
 public:
  /// Everything the distance needs, computed once per point.
  struct Embedded {
    ProjPoint image;
    std::vector<std::array<double, 3>> features;
  };

  explicit SurfaceMetric(const Atlas& atlas);
  double operator()(const SurfPoint& a, const SurfPoint& b) const;
  /// Per-blow-up feature in R^3 (zero away from the centre).
  std::vector<std::array<double, 3>> features(const SurfPoint& p) const;
  Embedded embed(const SurfPoint& p) const;
  static double distance(const Embedded& a, const Embedded& b);

 private:
  struct Direction {
    // Per leaf chart: numerator pair of the direction, and parent coordinates.
    std::map<std::string, std::array<Poly, 2>> pair;
    std::map<std::string, std::array<RatFunc, 2>> parent_coords;
    std::array<Rational, 2> center;
  };
  Atlas atlas_;
  std::vector<Direction> dirs_;
};

}  // namespace merotower
