#include "merotower/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "merotower/resultant.hpp"

namespace merotower {

namespace {

Poly var2(std::size_t i) { return Poly::variable(2, i); }
Poly const2(const Rational& c) { return Poly::constant(2, c); }
Poly var3(std::size_t i) { return Poly::variable(3, i); }

RatFunc ratio3(std::size_t num, std::size_t den) { return RatFunc(var3(num), var3(den)); }

// Joint rescaling of a tuple to coprime integer coefficients, first nonzero
// entry with a positive leading coefficient.
void normalize_tuple(std::span<Poly> polys) {
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const Poly& p : polys) {
    for (const auto& [e, c] : p.terms()) {
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
  }
  if (num_gcd == 0) return;
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  for (const Poly& p : polys) {
    if (!p.is_zero()) {
      if (sgn(p.leading_coefficient()) < 0) scale = -scale;
      break;
    }
  }
  for (Poly& p : polys) p *= scale;
}

// Cancels the common factor of a tuple of polynomials.
void cancel_tuple(std::span<Poly> polys) {
  const Poly g = gcd(std::span<const Poly>(polys.data(), polys.size()));
  if (g.is_zero()) throw DegenerateMap("all lifted components vanish identically");
  for (Poly& p : polys) p = *divide_exact(p, g);
  normalize_tuple(polys);
}

std::array<Complex, 3> eval3(const std::array<Poly, 3>& polys, const std::array<Complex, 2>& x) {
  return {polys[0].evaluate(std::span<const Complex>(x)), polys[1].evaluate(std::span<const Complex>(x)),
          polys[2].evaluate(std::span<const Complex>(x))};
}

double max_modulus(const std::array<Complex, 2>& c) { return std::max(std::abs(c[0]), std::abs(c[1])); }

std::optional<std::array<Complex, 2>> eval_pair(const std::array<RatFunc, 2>& f,
                                                std::span<const Complex> x) {
  const auto a = f[0].evaluate(x);
  const auto b = f[1].evaluate(x);
  if (!a || !b) return std::nullopt;
  return std::array<Complex, 2>{*a, *b};
}

// Picks among candidate images the one with the smallest coordinates inside
// the chart radius; `prefer` wins ties.
template <class Candidates>
std::optional<SurfPoint> choose_chart(const Candidates& candidates, const std::string& prefer) {
  std::optional<SurfPoint> best;
  double best_size = 0.0;
  for (const SurfPoint& c : candidates) {
    const double size = max_modulus(c.coords);
    if (!std::isfinite(size) || size > kChartRadius * (1.0 + 1e-9)) continue;
    const bool better = !best || size < best_size - 1e-9 ||
                        (std::abs(size - best_size) <= 1e-9 && c.chart == prefer && best->chart != prefer);
    if (better) {
      best = c;
      best_size = size;
    }
  }
  return best;
}

}  // namespace

Atlas Atlas::projective_plane() {
  Atlas a;
  const std::array<std::string, 3> names{"z", "w", "t"};
  for (std::size_t fixed = 0; fixed < 3; ++fixed) {
    Chart c;
    c.id = names[fixed] + "=1";
    std::size_t slot = 0;
    std::array<std::size_t, 2> free{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (i == fixed) {
        c.to_p2[i] = const2(1);
      } else {
        c.vars[slot] = names[i];
        c.to_p2[i] = var2(slot);
        free[slot++] = i;
      }
    }
    c.blowdown.assign(c.to_p2.begin(), c.to_p2.end());
    c.from_p2 = {ratio3(free[0], fixed), ratio3(free[1], fixed)};
    a.charts_.push_back(std::move(c));
  }
  a.rebuild_transitions();
  return a;
}

const Chart& Atlas::chart(const std::string& id) const {
  for (const Chart& c : charts_) {
    if (c.id == id) return c;
  }
  throw ChartError("unknown chart '" + id + "'");
}

bool Atlas::has_chart(const std::string& id) const {
  return std::any_of(charts_.begin(), charts_.end(), [&](const Chart& c) { return c.id == id; });
}

std::vector<std::string> Atlas::leaf_ids() const {
  std::vector<std::string> out;
  for (const Chart& c : charts_) {
    if (c.leaf) out.push_back(c.id);
  }
  return out;
}

Atlas Atlas::blowup_at(const std::string& chart_id, const std::array<Rational, 2>& center,
                       const std::array<std::string, 2>& first,
                       const std::array<std::string, 2>& second) const {
  if (!has_chart(chart_id)) throw ChartError("point is not covered: no chart '" + chart_id + "'");
  const Chart& parent = chart(chart_id);
  if (!parent.leaf) throw ChartError("chart '" + chart_id + "' was already blown up");
  if (abs(center[0]) > kChartRadius || abs(center[1]) > kChartRadius) {
    throw ChartError("centre lies outside the domain of chart '" + chart_id + "'");
  }
  for (const std::string& id : {first[0], second[0]}) {
    if (has_chart(id)) throw ChartError("chart id '" + id + "' already in use");
  }
  const Rational& c1 = center[0];
  const Rational& c2 = center[1];

  Atlas out = *this;
  const RatFunc px = parent.from_p2[0];
  const RatFunc py = parent.from_p2[1];
  const RatFunc dx = px - RatFunc(Poly::constant(3, c1));
  const RatFunc dy = py - RatFunc(Poly::constant(3, c2));

  auto make = [&](const std::string& id, const std::string& slope, bool along_x) {
    Chart c;
    c.id = id;
    c.parent = chart_id;
    if (along_x) {
      // (x, s) -> (x, c2 + (x - c1) s)
      c.vars = {parent.vars[0], slope};
      c.blowdown = {var2(0), const2(c2) + (var2(0) - const2(c1)) * var2(1)};
      c.from_p2 = {px, dy / dx};
    } else {
      // (y, r) -> (c1 + (y - c2) r, y)
      c.vars = {parent.vars[1], slope};
      c.blowdown = {const2(c1) + (var2(0) - const2(c2)) * var2(1), var2(0)};
      c.from_p2 = {py, dx / dy};
    }
    for (std::size_t i = 0; i < 3; ++i) c.to_p2[i] = parent.to_p2[i].substitute(c.blowdown);
    return c;
  };
  for (Chart& c : out.charts_) {
    if (c.id == chart_id) c.leaf = false;
  }
  out.charts_.push_back(make(first[0], first[1], true));
  out.charts_.push_back(make(second[0], second[1], false));
  out.blowups_.push_back({chart_id, center, {first[0], second[0]}});
  out.rebuild_transitions();
  return out;
}

Atlas Atlas::blowup_at(const ProjPoint& p, const std::array<std::string, 2>& first,
                       const std::array<std::string, 2>& second) const {
  if (!p.is_exact()) throw ChartError("blow-up centres must be given exactly");
  const auto& xs = *p.exact_coords();
  const std::array<std::string, 3> base{"z=1", "w=1", "t=1"};
  const std::size_t fixed = p.pivot();
  std::array<Rational, 2> local;
  std::size_t slot = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i != fixed) local[slot++] = xs[i] / xs[fixed];
  }
  if (!has_chart(base[fixed]) || !chart(base[fixed]).leaf) {
    throw ChartError("point is not covered by a leaf chart of P^2");
  }
  return blowup_at(base[fixed], local, first, second);
}

void Atlas::rebuild_transitions() {
  transitions_.clear();
  for (const Chart& from : charts_) {
    if (!from.leaf) continue;
    for (const Chart& to : charts_) {
      if (!to.leaf) continue;
      transitions_[{from.id, to.id}] = {to.from_p2[0].substitute(from.to_p2),
                                        to.from_p2[1].substitute(from.to_p2)};
    }
  }
}

const std::array<RatFunc, 2>& Atlas::transition(const std::string& from, const std::string& to) const {
  const auto it = transitions_.find({from, to});
  if (it == transitions_.end()) throw ChartError("no transition " + from + " -> " + to);
  return it->second;
}

std::optional<Poly> Atlas::exceptional_equation(std::size_t index, const std::string& chart_id) const {
  if (index >= blowups_.size()) throw ChartError("no blow-up with index " + std::to_string(index));
  const Blowup& b = blowups_[index];
  // Walk up the parent links: the chart lies above the blow-up iff it
  // descends from one of its two children.
  const Chart* c = &chart(chart_id);
  std::vector<const Chart*> path{c};
  while (!c->parent.empty() && c->id != b.children[0] && c->id != b.children[1]) {
    c = &chart(c->parent);
    path.push_back(c);
  }
  if (c->id != b.children[0] && c->id != b.children[1]) return std::nullopt;
  // Parent coordinates of the blown-up chart, pulled back to `chart_id`.
  std::vector<Poly> coords = c->blowdown;
  for (auto it = path.rbegin() + 1; it != path.rend(); ++it) {
    std::vector<Poly> next;
    for (const Poly& q : coords) next.push_back(q.substitute((*it)->blowdown));
    coords = std::move(next);
  }
  const std::array<Poly, 2> shifted{coords[0] - const2(b.center[0]), coords[1] - const2(b.center[1])};
  return gcd(shifted[0], shifted[1]);
}

std::vector<ProjPoint> Atlas::center_images() const {
  std::vector<ProjPoint> out;
  for (const Blowup& b : blowups_) {
    const Chart& p = chart(b.parent);
    std::vector<Rational> h(3);
    for (std::size_t i = 0; i < 3; ++i) h[i] = p.to_p2[i].evaluate(std::span<const Rational>(b.center));
    out.push_back(ProjPoint::exact(std::move(h)));
  }
  return out;
}

ProjPoint blowdown(const Atlas& atlas, const SurfPoint& p) {
  const auto h = eval3(atlas.chart(p.chart).to_p2, p.coords);
  return ProjPoint(std::vector<Complex>(h.begin(), h.end()));
}

std::vector<SurfPoint> representations(const Atlas& atlas, const SurfPoint& p) {
  std::vector<SurfPoint> out;
  for (const std::string& id : atlas.leaf_ids()) {
    const auto c = eval_pair(atlas.transition(p.chart, id), std::span<const Complex>(p.coords));
    if (c && max_modulus(*c) <= kChartRadius * (1.0 + 1e-9)) out.push_back({id, *c});
  }
  return out;
}

SurfPoint canonical_chart(const Atlas& atlas, const SurfPoint& p) {
  auto best = choose_chart(representations(atlas, p), p.chart);
  if (!best) throw ChartError("point lies outside every chart domain");
  return *best;
}

std::optional<SurfPoint> lift_point(const Atlas& atlas, const ProjPoint& x) {
  for (const ProjPoint& c : atlas.center_images()) {
    if (fubini_study(c, x) < 1e-12) return std::nullopt;
  }
  std::vector<SurfPoint> candidates;
  for (const std::string& id : atlas.leaf_ids()) {
    const auto c = eval_pair(atlas.chart(id).from_p2, std::span<const Complex>(x.coords()));
    if (c) candidates.push_back({id, *c});
  }
  auto best = choose_chart(candidates, "");
  if (!best) throw ChartError("no chart contains the lifted point");
  return best;
}

std::vector<LocalMap> lift_map_through(const Atlas& atlas, const RationalMap& f) {
  if (f.dim() != 2) throw UnsupportedDimension("blow-ups are implemented for surfaces only");
  std::vector<LocalMap> out;
  for (const Chart& c : atlas.charts()) {
    if (!c.leaf) continue;
    LocalMap m;
    m.chart = c.id;
    for (std::size_t i = 0; i < 3; ++i) {
      m.components[i] = f.components()[i].poly().substitute(std::span<const Poly>(c.to_p2));
    }
    cancel_tuple(m.components);
    const PlaneSolveResult zeros = solve_plane_system(m.components);
    m.positive_dimensional = zeros.positive_dimensional;
    m.holomorphic = zeros.points.empty() && !zeros.positive_dimensional;
    for (const PlanePoint& pt : zeros.points) {
      const std::array<Complex, 2> xy{pt.x, pt.y};
      if (max_modulus(xy) <= kChartRadius * (1.0 + 1e-9)) m.indeterminacy.push_back({c.id, xy});
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<SurfPoint> find_indeterminacy_on_exceptional(const std::vector<LocalMap>& lifted) {
  std::vector<SurfPoint> out;
  for (const LocalMap& m : lifted) out.insert(out.end(), m.indeterminacy.begin(), m.indeterminacy.end());
  return out;
}

std::string to_canonical(const LocalMap& m, const Atlas& atlas) {
  const auto& names = atlas.chart(m.chart).vars;
  std::string s = "[";
  for (std::size_t i = 0; i < 3; ++i) {
    if (i > 0) s += " : ";
    s += to_canonical(m.components[i], names);
  }
  return s + "]";
}

LiftedSelfMap::LiftedSelfMap(Atlas atlas, const RationalMap& f) : atlas_(std::move(atlas)) {
  for (const LocalMap& m : lift_map_through(atlas_, f)) {
    for (const std::string& to : atlas_.leaf_ids()) {
      const Chart& target = atlas_.chart(to);
      formulas_[{m.chart, to}] = {target.from_p2[0].substitute(m.components),
                                  target.from_p2[1].substitute(m.components)};
    }
  }
}

const std::array<RatFunc, 2>& LiftedSelfMap::formula(const std::string& from, const std::string& to) const {
  const auto it = formulas_.find({from, to});
  if (it == formulas_.end()) throw ChartError("no lifted formula " + from + " -> " + to);
  return it->second;
}

SurfPoint LiftedSelfMap::operator()(const SurfPoint& p) const {
  std::vector<SurfPoint> candidates;
  for (const std::string& to : atlas_.leaf_ids()) {
    const auto c = eval_pair(formula(p.chart, to), std::span<const Complex>(p.coords));
    if (c) candidates.push_back({to, *c});
  }
  auto best = choose_chart(candidates, p.chart);
  if (!best) throw NoLift("image of (" + p.chart + ") point has no single-valued chart inverse");
  return *best;
}

SurfaceMetric::SurfaceMetric(const Atlas& atlas) : atlas_(atlas) {
  for (const Blowup& b : atlas_.blowups()) {
    Direction d;
    d.center = b.center;
    const Chart& parent = atlas_.chart(b.parent);
    for (const std::string& id : atlas_.leaf_ids()) {
      const Chart& leaf = atlas_.chart(id);
      const std::array<RatFunc, 2> xy{parent.from_p2[0].substitute(leaf.to_p2),
                                      parent.from_p2[1].substitute(leaf.to_p2)};
      const RatFunc a = xy[0] - RatFunc(const2(b.center[0]));
      const RatFunc c = xy[1] - RatFunc(const2(b.center[1]));
      std::array<Poly, 2> pair{a.num() * c.den(), c.num() * a.den()};
      cancel_tuple(pair);
      d.pair[id] = pair;
      d.parent_coords[id] = xy;
    }
    dirs_.push_back(std::move(d));
  }
}

std::vector<std::array<double, 3>> SurfaceMetric::features(const SurfPoint& p) const {
  std::vector<std::array<double, 3>> out;
  const std::span<const Complex> x(p.coords);
  for (const Direction& d : dirs_) {
    std::array<double, 3> feat{0.0, 0.0, 0.0};
    const auto xy = eval_pair(d.parent_coords.at(p.chart), x);
    if (xy) {
      const double r = std::max(std::abs((*xy)[0] - d.center[0].get_d()),
                                std::abs((*xy)[1] - d.center[1].get_d()));
      const double cutoff = std::clamp(2.0 - r / 0.5, 0.0, 1.0);
      const auto& pair = d.pair.at(p.chart);
      const Complex a = pair[0].evaluate(x);
      const Complex b = pair[1].evaluate(x);
      const double n = std::norm(a) + std::norm(b);
      if (cutoff > 0.0 && n > 0.0) {
        const Complex ab = a * std::conj(b);
        feat = {cutoff * 2.0 * ab.real() / n, cutoff * 2.0 * ab.imag() / n,
                cutoff * (std::norm(a) - std::norm(b)) / n};
      }
    }
    out.push_back(feat);
  }
  return out;
}

SurfaceMetric::Embedded SurfaceMetric::embed(const SurfPoint& p) const {
  return {blowdown(atlas_, p), features(p)};
}

double SurfaceMetric::distance(const Embedded& a, const Embedded& b) {
  double d = fubini_study(a.image, b.image);
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    const double dx = a.features[i][0] - b.features[i][0];
    const double dy = a.features[i][1] - b.features[i][1];
    const double dz = a.features[i][2] - b.features[i][2];
    d += std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return d;
}

double SurfaceMetric::operator()(const SurfPoint& a, const SurfPoint& b) const {
  return distance(embed(a), embed(b));
}

}  // namespace merotower
