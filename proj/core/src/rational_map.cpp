#include "merotower/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "merotower/parallel.hpp"
#include "merotower/resultant.hpp"

namespace merotower {

namespace {
unsigned g_worker_threads = 0;
}

void set_worker_threads(unsigned n) { g_worker_threads = n; }

unsigned worker_threads() {
  if (g_worker_threads != 0) return g_worker_threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

ProjPoint::ProjPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw AlgebraError("projective point needs coordinates");
  double best = -1.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double m = std::abs(coords_[i]);
    if (!std::isfinite(m)) throw AlgebraError("projective point has non-finite coordinate");
    if (m > best) {
      best = m;
      pivot_ = i;
    }
  }
  if (best == 0.0) throw AlgebraError("projective point with all coordinates zero");
  const Complex scale = coords_[pivot_];
  for (auto& c : coords_) c /= scale;
  coords_[pivot_] = Complex(1.0, 0.0);
}

ProjPoint ProjPoint::exact(std::vector<Rational> coords) {
  if (coords.empty()) throw AlgebraError("projective point needs coordinates");
  std::size_t pivot = 0;
  Rational best = -1;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Rational m = abs(coords[i]);
    if (m > best) {
      best = m;
      pivot = i;
    }
  }
  if (sgn(best) == 0) throw AlgebraError("projective point with all coordinates zero");
  const Rational scale = coords[pivot];
  for (auto& c : coords) c /= scale;
  ProjPoint p;
  p.pivot_ = pivot;
  p.coords_.reserve(coords.size());
  for (const auto& c : coords) p.coords_.emplace_back(c.get_d(), 0.0);
  p.exact_ = std::move(coords);
  return p;
}

namespace {

double gap_with_pivot(const ProjPoint& a, const ProjPoint& b, std::size_t pivot) {
  const Complex bp = b.coords()[pivot];
  if (std::abs(bp) < 1e-300) return std::numeric_limits<double>::infinity();
  const Complex ap = a.coords()[pivot];
  double gap = 0.0;
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    gap = std::max(gap, std::abs(a.coords()[i] / ap - b.coords()[i] / bp));
  }
  return gap;
}

}  // namespace

double coordinate_gap(const ProjPoint& a, const ProjPoint& b) {
  if (a.coords().size() != b.coords().size()) return std::numeric_limits<double>::infinity();
  if (a.is_exact() && b.is_exact() && *a.exact_coords() == *b.exact_coords()) return 0.0;
  return std::max(gap_with_pivot(a, b, a.pivot()), gap_with_pivot(b, a, b.pivot()));
}

bool same_point(const ProjPoint& a, const ProjPoint& b, double tol) {
  return coordinate_gap(a, b) <= tol;
}

double fubini_study(const ProjPoint& a, const ProjPoint& b) {
  const auto& x = a.coords();
  const auto& y = b.coords();
  double wedge = 0.0;
  double nx = 0.0;
  double ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += std::norm(x[i]);
    ny += std::norm(y[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j) wedge += std::norm(x[i] * y[j] - x[j] * y[i]);
  }
  return std::min(1.0, std::sqrt(wedge / (nx * ny)));
}

bool AlgebraicPointSet::contains(const ProjPoint& p, double tol) const {
  return std::any_of(points.begin(), points.end(),
                     [&](const SetPoint& q) { return same_point(q.point, p, tol); });
}

void AlgebraicPointSet::insert(const SetPoint& p, double tol) {
  for (SetPoint& q : points) {
    if (same_point(q.point, p.point, tol)) {
      q.via_indeterminacy = q.via_indeterminacy || p.via_indeterminacy;
      if (!q.point.is_exact() && p.point.is_exact()) q.point = p.point;
      return;
    }
  }
  points.push_back(p);
}

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && sgn(m[piv][k]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

// Jacobian determinant of the affine cone map at a few fixed integer points.
bool is_dominant(const std::vector<HomoPoly>& comps, int degree) {
  if (degree <= 0) return false;
  const std::size_t n = comps.size();
  std::vector<std::vector<Poly>> jac(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) jac[i][j] = comps[i].poly().derivative(j);
  }
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Rational> pt(n);
    for (std::size_t j = 0; j < n; ++j) {
      pt[j] = static_cast<long>((trial * 7 + static_cast<int>(j) * 11 + 3) % 17) - 8 + trial;
    }
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = jac[i][j].evaluate(pt);
    }
    if (sgn(determinant(std::move(m))) != 0) return true;
  }
  return false;
}

}  // namespace

RationalMap::RationalMap(std::vector<HomoPoly> components) : components_(std::move(components)) {
  if (components_.size() < 2) throw AlgebraError("a map of P^k needs at least two components");
  const std::size_t nvars = components_.size();
  int degree = -1;
  for (const HomoPoly& c : components_) {
    if (c.is_zero()) continue;
    if (c.num_vars() != nvars) {
      throw AlgebraError("component has " + std::to_string(c.num_vars()) + " variables, expected " +
                         std::to_string(nvars));
    }
    if (degree >= 0 && c.degree() != degree) {
      throw AlgebraError("components have different degrees (" + std::to_string(degree) + " and " +
                         std::to_string(c.degree()) + ")");
    }
    degree = c.degree();
  }
  if (degree < 0) throw DegenerateMap("all components are zero");

  std::vector<Poly> polys;
  for (const HomoPoly& c : components_) polys.push_back(c.is_zero() ? Poly(nvars) : c.poly());
  const Poly common = gcd(std::span<const Poly>(polys));
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (Poly& p : polys) {
    if (p.is_zero()) continue;
    p = *divide_exact(p, common);
    for (const auto& [e, c] : p.terms()) {
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  for (const Poly& p : polys) {
    if (!p.is_zero()) {
      if (sgn(p.leading_coefficient()) < 0) scale = -scale;
      break;
    }
  }
  for (std::size_t i = 0; i < nvars; ++i) {
    components_[i] = HomoPoly(polys[i].is_zero() ? Poly(nvars) : polys[i] * scale);
  }
  degree_ = degree - std::max(0, common.total_degree());
  if (!is_dominant(components_, degree_)) throw DegenerateMap("map is not dominant");
}

RationalMap RationalMap::identity(std::size_t dim) {
  std::vector<HomoPoly> comps;
  for (std::size_t i = 0; i <= dim; ++i) comps.emplace_back(Poly::variable(dim + 1, i));
  return RationalMap(std::move(comps));
}

std::optional<ProjPoint> RationalMap::evaluate(const ProjPoint& x) const {
  if (x.coords().size() != components_.size()) throw AlgebraError("point dimension mismatch");
  std::vector<Complex> image(components_.size());
  double largest = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    image[i] = components_[i].evaluate(x.coords());
    largest = std::max(largest, std::abs(image[i]));
  }
  if (largest < kIndeterminacyThreshold) return std::nullopt;
  return ProjPoint(std::move(image));
}

std::vector<std::string> default_variable_names(std::size_t dim) {
  if (dim == 2) return {"z", "w", "t"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i <= dim; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

RationalMap compose(const RationalMap& f, const RationalMap& g) {
  if (f.dim() != g.dim()) throw AlgebraError("cannot compose maps of different dimensions");
  std::vector<Poly> inner;
  for (const HomoPoly& c : g.components()) inner.push_back(c.poly());
  std::vector<HomoPoly> comps;
  for (const HomoPoly& c : f.components()) comps.emplace_back(c.poly().substitute(inner));
  return RationalMap(std::move(comps));
}

std::vector<std::int64_t> degree_sequence(const RationalMap& f, int n_max) {
  if (n_max < 1) throw AlgebraError("degree sequence needs n_max >= 1");
  std::vector<std::int64_t> out;
  RationalMap iterate = f;
  out.push_back(iterate.degree());
  for (int n = 2; n <= n_max; ++n) {
    iterate = compose(f, iterate);
    out.push_back(iterate.degree());
  }
  return out;
}

double d1_estimate(const RationalMap& f, int n_max) {
  if (n_max < 2) throw AlgebraError("d1 estimate needs n_max >= 2");
  const std::int64_t deg = degree_sequence(f, n_max).back();
  const double approx = std::pow(static_cast<double>(deg), 1.0 / n_max);
  const auto root = static_cast<std::int64_t>(std::llround(approx));
  std::int64_t p = 1;
  for (int i = 0; i < n_max && p <= deg; ++i) p *= root;
  return p == deg ? static_cast<double>(root) : approx;
}

namespace {

void require_surface(const RationalMap& f) {
  if (f.dim() != 2) {
    throw UnsupportedDimension("exact solving is implemented for P^2 only (got P^" +
                               std::to_string(f.dim()) + ")");
  }
}

// Common zeros of homogeneous equations on P^2, chart by chart. A point is
// taken from chart i only when coordinate i has the largest modulus.
AlgebraicPointSet solve_projective(std::span<const Poly> equations) {
  AlgebraicPointSet out;
  for (std::size_t chart = 0; chart < 3; ++chart) {
    std::vector<Poly> local;
    for (const Poly& e : equations) local.push_back(e.eliminate_variable(chart, 1));
    const PlaneSolveResult sol = solve_plane_system(local);
    out.has_positive_dimensional_part = out.has_positive_dimensional_part || sol.positive_dimensional;
    for (const PlanePoint& pt : sol.points) {
      if (std::abs(pt.x) > 1.0 + 1e-6 || std::abs(pt.y) > 1.0 + 1e-6) continue;
      std::size_t slot = 0;
      if (pt.is_exact()) {
        std::vector<Rational> coords(3);
        const Rational local_exact[2] = {*pt.exact_x, *pt.exact_y};
        for (std::size_t i = 0; i < 3; ++i) coords[i] = i == chart ? Rational(1) : local_exact[slot++];
        out.insert({ProjPoint::exact(std::move(coords)), false});
      } else {
        std::vector<Complex> coords(3);
        const Complex local_numeric[2] = {pt.x, pt.y};
        for (std::size_t i = 0; i < 3; ++i) {
          coords[i] = i == chart ? Complex(1.0, 0.0) : local_numeric[slot++];
        }
        out.insert({ProjPoint(std::move(coords)), false});
      }
    }
  }
  return out;
}

std::vector<Poly> component_polys(const RationalMap& f) {
  std::vector<Poly> out;
  for (const HomoPoly& c : f.components()) out.push_back(c.poly());
  return out;
}

bool in_indeterminacy(const RationalMap& f, const AlgebraicPointSet& locus, const ProjPoint& p) {
  if (p.is_exact()) {
    const auto& xs = *p.exact_coords();
    return std::all_of(f.components().begin(), f.components().end(),
                       [&](const HomoPoly& c) { return sgn(c.poly().evaluate(xs)) == 0; });
  }
  return locus.contains(p, 1e-7);
}

std::optional<std::vector<Rational>> rational_target(const ProjPoint& y) {
  if (y.is_exact()) return *y.exact_coords();
  std::vector<Rational> out;
  for (const Complex& c : y.coords()) {
    if (c.imag() != 0.0) return std::nullopt;
    out.push_back(from_double(c.real()));
  }
  return out;
}

}  // namespace

AlgebraicPointSet indeterminacy_locus(const RationalMap& f) {
  require_surface(f);
  AlgebraicPointSet locus = solve_projective(component_polys(f));
  for (SetPoint& p : locus.points) p.via_indeterminacy = true;
  return locus;
}

AlgebraicPointSet preimage_points(const RationalMap& f, const ProjPoint& target) {
  require_surface(f);
  if (target.coords().size() != 3) throw AlgebraError("target must be a point of P^2");
  const AlgebraicPointSet locus = indeterminacy_locus(f);
  const std::vector<Poly> comps = component_polys(f);
  const std::size_t j = target.pivot();

  AlgebraicPointSet out;
  if (auto y = rational_target(target)) {
    std::vector<Poly> equations;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i == j) continue;
      equations.push_back(comps[i] * (*y)[j] - comps[j] * (*y)[i]);
    }
    AlgebraicPointSet sol = solve_projective(equations);
    out.has_positive_dimensional_part = sol.has_positive_dimensional_part;
    for (SetPoint& p : sol.points) {
      p.via_indeterminacy = in_indeterminacy(f, locus, p.point);
      out.insert(p);
    }
    return out;
  }
  for (const ProjPoint& p : track_preimages(f, target)) out.insert({p, false});
  // Every indeterminacy point solves the 2x2 system; kept conservatively.
  for (const SetPoint& p : locus.points) out.insert({p.point, true});
  out.has_positive_dimensional_part = locus.has_positive_dimensional_part;
  return out;
}

TopologicalDegreeReport topological_degree(const RationalMap& f, int trials, std::uint64_t seed) {
  require_surface(f);
  if (trials < 3) throw AlgebraError("topological degree needs at least 3 trials");
  TopologicalDegreeReport report;
  report.trials = trials;
  report.counts.assign(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    std::uniform_int_distribution<int> num(-10, 10);
    std::uniform_int_distribution<int> den(1, 7);
    std::vector<Rational> coords(3);
    // Zero coordinates are redrawn: coordinate lines are often critical values.
    for (auto& c : coords) {
      int a = 0;
      while (a == 0) a = num(rng);
      c = Rational(a, den(rng));
      c.canonicalize();
    }
    const AlgebraicPointSet pre = preimage_points(f, ProjPoint::exact(coords));
    report.counts[i] = static_cast<int>(std::count_if(
        pre.points.begin(), pre.points.end(), [](const SetPoint& p) { return !p.via_indeterminacy; }));
  });
  std::map<int, int> freq;
  for (int c : report.counts) ++freq[c];
  for (const auto& [count, n] : freq) {
    if (n > report.agreeing) {
      report.agreeing = n;
      report.degree = count;
    }
  }
  if (report.agreeing < 2) throw InconclusiveError("no two topological-degree trials agree");
  return report;
}

AlgebraicPointSet backward_chain_set(const RationalMap& f, const AlgebraicPointSet& a, int n) {
  require_surface(f);
  AlgebraicPointSet current = a;
  for (int step = 0; step < n; ++step) {
    AlgebraicPointSet next;
    next.has_positive_dimensional_part = current.has_positive_dimensional_part;
    for (const SetPoint& p : current.points) {
      const AlgebraicPointSet pre = preimage_points(f, p.point);
      next.has_positive_dimensional_part =
          next.has_positive_dimensional_part || pre.has_positive_dimensional_part;
      for (const SetPoint& q : pre.points) next.insert(q);
    }
    current = std::move(next);
  }
  return current;
}

std::string to_string(DisjointnessVerdict::Kind kind) {
  switch (kind) {
    case DisjointnessVerdict::Kind::Holds:
      return "HOLDS";
    case DisjointnessVerdict::Kind::Fails:
      return "FAILS";
    case DisjointnessVerdict::Kind::Undecided:
      return "UNDECIDED";
  }
  return "UNKNOWN";
}

DisjointnessVerdict disjointness_check(const RationalMap& f, int n_max) {
  require_surface(f);
  DisjointnessVerdict verdict;
  verdict.sets.push_back(indeterminacy_locus(f));
  for (int m = 1; m <= n_max; ++m) {
    verdict.sets.push_back(backward_chain_set(f, verdict.sets.back(), 1));
  }
  bool partial = false;
  for (const auto& s : verdict.sets) partial = partial || s.has_positive_dimensional_part;
  for (int m = 0; m <= n_max; ++m) {
    for (int q = m + 1; q <= n_max; ++q) {
      const auto& sm = verdict.sets[m];
      const auto& sq = verdict.sets[q];
      const bool meet = std::any_of(sm.points.begin(), sm.points.end(),
                                    [&](const SetPoint& p) { return sq.contains(p.point); });
      if (meet) verdict.pairs.emplace_back(m, q);
    }
  }
  if (!verdict.pairs.empty()) {
    verdict.kind = DisjointnessVerdict::Kind::Fails;
  } else if (partial) {
    verdict.kind = DisjointnessVerdict::Kind::Undecided;
  } else {
    verdict.kind = DisjointnessVerdict::Kind::Holds;
  }
  return verdict;
}

}  // namespace merotower
