#include "merotower/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "merotower/json_io.hpp"
#include "merotower/systems.hpp"

namespace merotower {

using nlohmann::json;

namespace {

const std::vector<std::string> kZWT{"z", "w", "t"};

RationalMap map_of(const std::array<const char*, 3>& comps) {
  std::vector<HomoPoly> hs;
  for (const char* c : comps) hs.emplace_back(parse_poly(c, kZWT));
  return RationalMap(std::move(hs));
}

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string fmt_number(double x) {
  if (std::abs(x) < 1e-12) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_complex(const Complex& c) {
  if (std::abs(c.imag()) < 1e-12) return fmt_number(c.real());
  return "(" + fmt_number(c.real()) + (c.imag() < 0 ? "-" : "+") + fmt_number(std::abs(c.imag())) + "i)";
}

std::string fmt_point(const ProjPoint& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.coords().size(); ++i) {
    if (i) out += ":";
    out += p.is_exact() ? to_string((*p.exact_coords())[i]) : fmt_complex(p.coords()[i]);
  }
  return out + "]";
}

std::string fmt_surf(const SurfPoint& p) {
  return p.chart + " (" + fmt_complex(p.coords[0]) + ", " + fmt_complex(p.coords[1]) + ")";
}

template <class T, class Fmt>
std::string fmt_set(const std::vector<T>& items, Fmt&& fmt) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  return out + "}";
}

/// `[a : b : c]` from hand-written components in a chart's variables.
std::string bracket(const std::vector<std::string>& vars, const std::array<const char*, 3>& comps) {
  std::string out = "[";
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) out += " : ";
    out += to_canonical(parse_poly(comps[i], vars), vars);
  }
  return out + "]";
}

const LocalMap& local_on(const std::vector<LocalMap>& maps, const std::string& chart) {
  for (const LocalMap& m : maps) {
    if (m.chart == chart) return m;
  }
  throw ChartError("no lifted map on chart " + chart);
}

std::string csv_with_system(const EntropyReport& r, const std::string& tag) {
  std::string out;
  char buf[160];
  for (const EntropyRow& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%zu,%zu\n", tag.c_str(), row.m, row.epsilon, row.count,
                  row.discards);
    out += buf;
  }
  return out;
}

json formulas_json(const std::vector<FormulaCheck>& checks) {
  json out = json::array();
  for (const FormulaCheck& c : checks) {
    out.push_back({{"label", c.label}, {"computed", c.computed}, {"expected", c.expected}, {"match", c.matches()}});
  }
  return out;
}

json degrees_json(const RationalMap& f, int n, int trials, std::uint64_t seed) {
  const auto seq = degree_sequence(f, n);
  const TopologicalDegreeReport td = topological_degree(f, trials, seed);
  return {{"sequence", seq},
          {"d1_estimate", d1_estimate(f, n)},
          {"topological_degree", {{"degree", td.degree}, {"agreeing", td.agreeing}, {"trials", td.trials},
                                  {"counts", td.counts}}}};
}

}  // namespace

RationalMap guedj_map() { return map_of({"z^2", "w*t + t^2", "t^2"}); }

Atlas guedj_atlas() {
  return Atlas::projective_plane().blowup_at(ProjPoint::exact({0, 1, 0}), {"alpha=1", "beta"}, {"beta=1", "alpha"});
}

Atlas guedj_double_atlas() {
  return guedj_atlas().blowup_at("alpha=1", {Rational(0), Rational(0)}, {"u=1", "v"}, {"v=1", "u"});
}

Tower build_guedj_tower() { return resolved_tower("guedj", guedj_map(), guedj_double_atlas()); }

std::vector<FormulaCheck> guedj_formulas() {
  const RationalMap f = guedj_map();
  std::vector<FormulaCheck> out;

  std::string fs = "[";
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) fs += " : ";
    fs += to_canonical(f.components()[i].poly(), kZWT);
  }
  fs += "]";
  std::string fe = "[";
  const char* hand[3] = {"z*z", "t*(w + t)", "t*t"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) fe += " : ";
    fe += to_canonical(parse_poly(hand[i], kZWT), kZWT);
  }
  fe += "]";
  out.push_back({"f", fs, fe});

  std::vector<ProjPoint> locus;
  for (const SetPoint& p : indeterminacy_locus(f).points) locus.push_back(p.point);
  out.push_back({"I(f)", fmt_set(locus, fmt_point), "{[0:1:0]}"});

  const Atlas x1 = guedj_atlas();
  const auto lifted1 = lift_map_through(x1, f);
  out.push_back({"f o e1 on alpha=1", to_canonical(local_on(lifted1, "alpha=1"), x1),
                 bracket({"z", "beta"}, {"z", "beta + z*beta^2", "z*beta^2"})});
  out.push_back({"f o e1 on beta=1", to_canonical(local_on(lifted1, "beta=1"), x1),
                 bracket({"t", "alpha"}, {"t*alpha^2", "1 + t", "t"})});
  out.push_back({"indeterminacy of f o e1", fmt_set(find_indeterminacy_on_exceptional(lifted1), fmt_surf),
                 "{alpha=1 (0, 0)}"});

  const Atlas x2 = guedj_double_atlas();
  const auto lifted2 = lift_map_through(x2, f);
  out.push_back({"f o e1 o e2 on u=1", to_canonical(local_on(lifted2, "u=1"), x2),
                 bracket({"z", "v"}, {"1", "v + (z*v)^2", "(z*v)^2"})});
  out.push_back({"f o e1 o e2 on v=1", to_canonical(local_on(lifted2, "v=1"), x2),
                 bracket({"beta", "u"}, {"u", "1 + u*beta^2", "u*beta^2"})});
  bool all_holomorphic = true;
  for (const LocalMap& m : lifted2) all_holomorphic = all_holomorphic && m.holomorphic;
  out.push_back({"f o e1 o e2 holomorphic on every chart", all_holomorphic ? "yes" : "no", "yes"});

  const LiftedSelfMap g(x1, f);
  const std::array<std::string, 2> ta{"t", "alpha"};
  const auto& gf = g.formula("beta=1", "beta=1");
  const RatFunc g1(parse_poly("t", ta), parse_poly("1 + t", ta));
  const RatFunc g2(parse_poly("alpha^2", ta));
  out.push_back({"G on beta=1", "(" + to_canonical(gf[0], ta) + ", " + to_canonical(gf[1], ta) + ")",
                 "(" + to_canonical(g1, ta) + ", " + to_canonical(g2, ta) + ")"});

  const SurfPoint on_e2{"u=1", {Complex(0.0), Complex(0.37, -0.21)}};
  out.push_back({"pi1 of a point of the second exceptional curve", fmt_point(blowdown(x2, on_e2)), "[0:1:0]"});
  return out;
}

std::string formulas_text(const std::vector<FormulaCheck>& checks) {
  std::string out;
  for (const FormulaCheck& c : checks) out += c.label + " = " + c.computed + "\n";
  return out;
}

std::string degrees_csv(const RationalMap& f, int n_max) {
  const auto seq = degree_sequence(f, n_max);
  std::string out = "n,degree,ratio,root\n";
  char buf[128];
  std::int64_t prev = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    std::snprintf(buf, sizeof buf, "%d,%lld,%.6g,%.6g\n", n, static_cast<long long>(seq[i]),
                  static_cast<double>(seq[i]) / static_cast<double>(prev),
                  std::pow(static_cast<double>(seq[i]), 1.0 / n));
    out += buf;
    prev = seq[i];
  }
  return out;
}

EntropyReport guedj_circle_entropy(std::size_t samples, int m_lo, int m_hi, const std::vector<double>& epsilons,
                                   std::uint64_t seed) {
  auto g = std::make_shared<const LiftedSelfMap>(guedj_atlas(), guedj_map());
  std::vector<SurfPoint> pts;
  pts.reserve(samples);
  // t = 0 in the chart beta=1 is the exceptional curve over [0:1:0].
  for (const Complex& a : circle_grid(samples, seed)) pts.push_back({"beta=1", {Complex(0.0), a}});
  const auto states = surface_states(*g, pts);
  EntropyReport r = entropy_report(surface_system(g), std::span<const SurfaceState>(states), m_lo, m_hi, epsilons);
  r.system = "guedj-circle";
  return r;
}

DemoBundle run_guedj_demo(const GuedjConfig& cfg) {
  DemoBundle b;
  const RationalMap f = guedj_map();

  const auto checks = stage("formulas", [] { return guedj_formulas(); });
  bool formulas_ok = true;
  for (const FormulaCheck& c : checks) formulas_ok = formulas_ok && c.matches();
  b.formulas = formulas_text(checks);

  const json degrees = stage("degrees", [&] { return degrees_json(f, cfg.degree_n, cfg.topo_trials, cfg.seed); });
  b.degrees_csv = stage("degrees", [&] { return degrees_csv(f, cfg.degree_n); });
  bool degrees_ok = degrees["d1_estimate"].get<double>() == 2.0 &&
                    degrees["topological_degree"]["degree"] == 2 &&
                    degrees["topological_degree"]["agreeing"] == cfg.topo_trials;
  std::int64_t expect = 1;
  for (const auto& d : degrees["sequence"]) {
    expect *= 2;
    degrees_ok = degrees_ok && d.get<std::int64_t>() == expect;
  }

  const EntropyReport circle = stage("entropy", [&] {
    return guedj_circle_entropy(cfg.circle_samples, cfg.m_lo, cfg.m_hi, cfg.epsilons, cfg.seed);
  });
  b.entropy_csv = "system,m,epsilon,N,discards\n" + csv_with_system(circle, circle.system);
  int hits = 0;
  for (const SlopeFit& fit : circle.fits) {
    if (fit.slope >= cfg.band_lo && fit.slope <= cfg.band_hi) ++hits;
  }

  const DisjointnessVerdict dv = stage("disjointness", [&] { return disjointness_check(f, cfg.disjoint_n); });
  json sets = json::array();
  for (const AlgebraicPointSet& s : dv.sets) sets.push_back(point_set_to_json(s));
  json pairs = json::array();
  for (const auto& [m, q] : dv.pairs) pairs.push_back({m, q});

  const json tower = stage("tower", [&] {
    const Tower t = build_guedj_tower();
    const Lemma4Report l4 = lemma4_check(t, cfg.lemma4_samples, cfg.seed);
    return json{{"descriptor", tower_descriptor(t)}, {"lemma4", to_json(l4)}};
  });

  b.summary = {{"demo", "guedj"},
               {"seed", cfg.seed},
               {"map", map_to_json(f)},
               {"formulas", formulas_json(checks)},
               {"degrees", degrees},
               {"circle_entropy", to_json(circle)},
               {"disjointness", {{"n", cfg.disjoint_n}, {"verdict", to_string(dv.kind)}, {"pairs", pairs},
                                 {"sets", sets}}},
               {"tower", tower}};
  b.verdicts = {
      {"formulas_match", formulas_ok},
      {"degrees_ok", degrees_ok},
      {"circle_slope_band", {cfg.band_lo, cfg.band_hi}},
      {"circle_band_hits", hits},
      {"circle_entropy_ok", hits >= cfg.band_hits},
      {"circle_saturated", circle.saturated},
      {"disjointness", to_string(dv.kind)},
      {"disjointness_first_pair", pairs.empty() ? json(nullptr) : pairs[0]},
      {"disjointness_hypothesis_holds", dv.kind == DisjointnessVerdict::Kind::Holds},
      {"explanation",
       "f^-1(I) = I, so the backward chain sets of the indeterminacy point meet; entropy "
       "supported on the exceptional curve over I (alpha -> alpha^2, log 2) is invisible to "
       "f itself."},
      {"lemma4_max_discrepancy", tower["lemma4"]["max_discrepancy"]}};
  return b;
}

double ToyEntropy::difference() const { return std::abs(sigma.fits.front().slope - base.fits.front().slope); }

ToyEntropy toy_entropy(const ToyConfig& cfg) {
  const RationalMap sq = map_of({"z^2", "w^2", "t^2"});
  ToyEntropy out;
  const auto base = torus_samples(cfg.samples, cfg.seed);
  out.base = entropy_report(map_system(sq), std::span<const ProjPoint>(base), cfg.m_lo, cfg.m_hi, {cfg.epsilon});
  out.base.system = "base";
  auto tower = std::make_shared<const Tower>(identity_tower(sq, cfg.depth, sample_torus));
  std::vector<TruncatedPoint> lifted;
  lifted.reserve(base.size());
  for (const ProjPoint& x : base) lifted.push_back(lift_base_point(*tower, x, cfg.depth));
  out.sigma_epsilon = cfg.epsilon * (2.0 - std::ldexp(1.0, -cfg.depth));
  out.sigma = entropy_report(sigma_system(tower), std::span<const TruncatedPoint>(lifted), cfg.m_lo, cfg.m_hi,
                             {out.sigma_epsilon});
  out.sigma.system = "sigma";
  return out;
}

DemoBundle run_toy_tower_demo(const ToyConfig& cfg) {
  DemoBundle b;
  const RationalMap sq = map_of({"z^2", "w^2", "t^2"});
  const Tower tower = stage("tower", [&] { return identity_tower(sq, cfg.depth, sample_torus); });

  std::vector<FormulaCheck> checks;
  checks.push_back({"F",
                    "[" + to_canonical(sq.components()[0].poly(), kZWT) + " : " +
                        to_canonical(sq.components()[1].poly(), kZWT) + " : " +
                        to_canonical(sq.components()[2].poly(), kZWT) + "]",
                    bracket(kZWT, {"z*z", "w*w", "t*t"})});
  checks.push_back({"I(F)", fmt_set(indeterminacy_locus(sq).points, [](const SetPoint& p) { return fmt_point(p.point); }),
                    "{}"});
  checks.push_back({"depth", std::to_string(tower.depth()), std::to_string(cfg.depth)});
  b.formulas = formulas_text(checks);
  b.degrees_csv = stage("degrees", [&] { return degrees_csv(sq, 6); });

  const Lemma4Report l4 = stage("lemma4", [&] { return lemma4_check(tower, cfg.lemma4_samples, cfg.seed); });

  // delta on lifted pairs against FS * sum_n 2^-n.
  const double factor = 2.0 - std::ldexp(1.0, -cfg.depth);
  double closed_form_err = stage("closed-form", [&] {
    const auto pts = p2_samples(2 * static_cast<std::size_t>(cfg.closed_form_pairs), cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < cfg.closed_form_pairs; ++i) {
      const ProjPoint& x = pts[2 * i];
      const ProjPoint& y = pts[2 * i + 1];
      const double fs = fubini_study(x, y);
      const double d = delta(tower, lift_base_point(tower, x, cfg.depth), lift_base_point(tower, y, cfg.depth));
      if (fs > 0.0) worst = std::max(worst, std::abs(d - factor * fs) / (factor * fs));
    }
    return worst;
  });

  const ToyEntropy te = stage("entropy", [&] { return toy_entropy(cfg); });
  b.entropy_csv = "system,m,epsilon,N,discards\n" + csv_with_system(te.base, "base") +
                  csv_with_system(te.sigma, "sigma");
  const double diff = te.difference();

  b.summary = {{"demo", "toy"},
               {"seed", cfg.seed},
               {"map", map_to_json(sq)},
               {"tower", tower_descriptor(tower)},
               {"lemma4", to_json(l4)},
               {"delta_closed_form", {{"factor", factor}, {"pairs", cfg.closed_form_pairs},
                                      {"max_relative_error", closed_form_err}}},
               {"entropy", {{"base", to_json(te.base)}, {"sigma", to_json(te.sigma)},
                            {"sigma_epsilon", te.sigma_epsilon}, {"slope_difference", diff}}}};
  b.verdicts = {{"theorem1_consistent", diff < cfg.tolerance},
                {"slope_difference", diff},
                {"tolerance", cfg.tolerance},
                {"saturated", te.base.saturated || te.sigma.saturated},
                {"lemma4_pass", l4.max_discrepancy < 1e-10},
                {"lemma4_max_discrepancy", l4.max_discrepancy},
                {"delta_closed_form_pass", closed_form_err < 1e-12}};
  return b;
}

void write_bundle(const DemoBundle& b, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << text;
  };
  put("summary.json", b.summary.dump(2) + "\n");
  put("verdicts.json", b.verdicts.dump(2) + "\n");
  put("entropy.csv", b.entropy_csv);
  put("degrees.csv", b.degrees_csv);
  put("formulas.txt", b.formulas);
}

}  // namespace merotower
