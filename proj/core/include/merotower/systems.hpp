#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "merotower/blowup.hpp"
#include "merotower/entropy.hpp"
#include "merotower/tower.hpp"

namespace merotower {

/// alpha -> alpha^2 on the unit circle, chord distance.
System<Complex> circle_doubling();

/// A point of a blown-up surface together with its cached metric embedding.
struct SurfaceState {
  SurfPoint point;
  SurfaceMetric::Embedded embedded;
};

/// Lifted self-map of a blown-up surface with the surface metric.
System<SurfaceState> surface_system(std::shared_ptr<const LiftedSelfMap> g);
std::vector<SurfaceState> surface_states(const LiftedSelfMap& g, std::span<const SurfPoint> points);

/// f on P^2 with the Fubini-Study chordal distance. Orbits stop within 1e-9
/// of an indeterminacy point.
System<ProjPoint> map_system(const RationalMap& f);

/// sigma on truncated points with the metric delta.
System<TruncatedPoint> sigma_system(std::shared_ptr<const Tower> tower);

/// n points e^{i(phi + 2 pi k / n)} in seeded random order, phi drawn from the seed.
std::vector<Complex> circle_grid(std::size_t n, std::uint64_t seed);
std::vector<ProjPoint> torus_samples(std::size_t n, std::uint64_t seed);
std::vector<ProjPoint> p2_samples(std::size_t n, std::uint64_t seed);

struct LiftCheckReport {
  std::size_t base_count = 0;
  std::size_t lifted_count = 0;
  std::size_t unliftable = 0;
  /// Index pairs (into the base set) whose lifts are closer than eps upstairs.
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  /// Smallest ratio of upstairs to downstairs Bowen distance.
  double min_ratio = INFINITY;
  bool preserved() const { return violations.empty() && unliftable == 0 && lifted_count == base_count; }
};

/// Lifts every orbit of an (m, eps)-separated set of X_0 to level `level`
/// (the lifted orbit is the F_n-orbit when fibres are points) and rechecks
/// separation with dist_level.
LiftCheckReport separated_lift_check(const Tower& t, std::span<const ProjPoint> base_set,
                                     const BowenParams& params, int level);

}  // namespace merotower
