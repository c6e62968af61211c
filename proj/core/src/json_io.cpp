#include "merotower/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace merotower {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw DocumentError(field + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where.empty() ? "document" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

int need_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) fail(join(where, key), "expected an integer");
  return v.get<int>();
}

Rational read_rational(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    auto q = parse_rational(v.get<std::string>());
    if (!q) fail(field, "not a rational number: \"" + v.get<std::string>() + "\"");
    return *q;
  }
  fail(field, "expected an integer or a string like \"1/2\"");
}

std::array<std::string, 2> read_pair(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
    fail(join(where, key), "expected [chart id, variable name]");
  }
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DocumentError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                        ": malformed JSON");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

RationalMap map_from_json(const json& j) {
  const int dim = need_int(j, "dim", "");
  if (dim < 1) fail("dim", "must be >= 1");
  std::vector<std::string> names = default_variable_names(static_cast<std::size_t>(dim));
  if (j.contains("variables")) {
    const json& v = j["variables"];
    if (!v.is_array() || v.size() != names.size()) {
      fail("variables", "expected " + std::to_string(names.size()) + " names");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!v[i].is_string()) fail("variables[" + std::to_string(i) + "]", "expected a string");
      names[i] = v[i].get<std::string>();
    }
  }
  const int degree = need_int(j, "degree", "");
  const json& comps = need(j, "components", "");
  if (!comps.is_array()) fail("components", "expected an array of polynomial strings");
  if (comps.size() != names.size()) {
    fail("components", "expected " + std::to_string(names.size()) + " entries for dim " + std::to_string(dim));
  }
  std::vector<HomoPoly> hs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string field = "components[" + std::to_string(i) + "]";
    if (!comps[i].is_string()) fail(field, "expected a string");
    try {
      HomoPoly h(parse_poly(comps[i].get<std::string>(), names));
      if (!h.is_zero() && h.degree() != degree) {
        fail(field, "has degree " + std::to_string(h.degree()) + ", not " + std::to_string(degree));
      }
      hs.push_back(std::move(h));
    } catch (const ParseError& e) {
      fail(field, e.what());
    } catch (const AlgebraError& e) {
      fail(field, e.what());
    }
  }
  try {
    RationalMap f(std::move(hs));
    if (f.degree() != degree) {
      fail("degree", "components share a factor; the reduced degree is " + std::to_string(f.degree()));
    }
    return f;
  } catch (const AlgebraError& e) {
    fail("components", e.what());
  } catch (const DegenerateMap& e) {
    fail("components", e.what());
  }
}

json map_to_json(const RationalMap& f) {
  const auto names = default_variable_names(f.dim());
  json comps = json::array();
  for (const HomoPoly& h : f.components()) comps.push_back(to_canonical(h.poly(), names));
  return {{"dim", f.dim()}, {"degree", f.degree()}, {"components", comps}, {"variables", names}};
}

json point_to_json(const ProjPoint& p) {
  json c = json::array();
  for (const Complex& z : p.coords()) c.push_back(complex_json(z));
  json out{{"coords", c}};
  if (p.is_exact()) {
    json e = json::array();
    for (const Rational& q : *p.exact_coords()) e.push_back(to_string(q));
    out["exact"] = e;
  }
  return out;
}

json point_set_to_json(const AlgebraicPointSet& s) {
  json pts = json::array();
  for (const SetPoint& p : s.points) {
    json e = point_to_json(p.point);
    e["via_indeterminacy"] = p.via_indeterminacy;
    pts.push_back(e);
  }
  return {{"points", pts}, {"positive_dimensional", s.has_positive_dimensional_part}};
}

json atlas_to_json(const Atlas& atlas) {
  static const std::vector<std::string> homog{"Z", "W", "T"};
  json charts = json::array();
  for (const Chart& c : atlas.charts()) {
    json bd = json::array();
    for (const Poly& p : c.blowdown) bd.push_back(to_canonical(p, c.vars));
    json top = json::array();
    for (const Poly& p : c.to_p2) top.push_back(to_canonical(p, c.vars));
    json inv = json::array();
    for (const RatFunc& r : c.from_p2) inv.push_back(to_canonical(r, homog));
    json exc = json::array();
    for (std::size_t i = 0; i < atlas.blowups().size(); ++i) {
      auto e = atlas.exceptional_equation(i, c.id);
      exc.push_back(e ? json(to_canonical(*e, c.vars)) : json(nullptr));
    }
    charts.push_back({{"id", c.id},
                      {"parent", c.parent},
                      {"vars", c.vars},
                      {"leaf", c.leaf},
                      {"blowdown", bd},
                      {"to_p2", top},
                      {"from_p2", inv},
                      {"exceptional", exc}});
  }
  json blowups = json::array();
  for (const Blowup& b : atlas.blowups()) {
    blowups.push_back({{"parent", b.parent},
                       {"center", {to_string(b.center[0]), to_string(b.center[1])}},
                       {"children", b.children}});
  }
  return {{"charts", charts}, {"blowups", blowups}};
}

Atlas atlas_from_json(const json& blowups) {
  if (!blowups.is_array()) fail("blowups", "expected an array");
  Atlas atlas = Atlas::projective_plane();
  for (std::size_t i = 0; i < blowups.size(); ++i) {
    const std::string where = "blowups[" + std::to_string(i) + "]";
    const json& b = blowups[i];
    const auto first = read_pair(b, "first", where);
    const auto second = read_pair(b, "second", where);
    try {
      if (b.contains("point")) {
        const json& p = b["point"];
        if (!p.is_array() || p.size() != 3) fail(where + ".point", "expected three coordinates");
        std::vector<Rational> c;
        for (std::size_t k = 0; k < 3; ++k) c.push_back(read_rational(p[k], where + ".point[" + std::to_string(k) + "]"));
        atlas = atlas.blowup_at(ProjPoint::exact(std::move(c)), first, second);
      } else {
        const json& chart = need(b, "chart", where);
        if (!chart.is_string()) fail(where + ".chart", "expected a chart id");
        const json& c = need(b, "center", where);
        if (!c.is_array() || c.size() != 2) fail(where + ".center", "expected two coordinates");
        atlas = atlas.blowup_at(chart.get<std::string>(),
                                {read_rational(c[0], where + ".center[0]"), read_rational(c[1], where + ".center[1]")},
                                first, second);
      }
    } catch (const ChartError& e) {
      fail(where, e.what());
    }
  }
  return atlas;
}

TowerSpec tower_from_json(const json& j) {
  const json& mj = need(j, "map", "");
  RationalMap f = [&] {
    try {
      return map_from_json(mj);
    } catch (const DocumentError& e) {
      throw DocumentError(std::string("map.") + e.what());
    }
  }();
  if (f.dim() != 2) fail("map.dim", "towers are implemented over P^2 only");
  const json& cons = need(j, "construction", "");
  if (!cons.is_string()) fail("construction", "expected \"identity\" or \"resolved\"");
  const std::string name = j.value("name", cons.get<std::string>());
  TowerSpec spec;
  if (j.contains("sampler")) {
    if (!j["sampler"].is_string()) fail("sampler", "expected \"p2\" or \"torus\"");
    spec.sampler = j["sampler"].get<std::string>();
    if (spec.sampler != "p2" && spec.sampler != "torus") fail("sampler", "expected \"p2\" or \"torus\"");
  }
  if (cons == "identity") {
    const int depth = need_int(j, "depth", "");
    if (depth < 1) fail("depth", "must be >= 1");
    try {
      spec.tower = std::make_shared<const Tower>(
          identity_tower(f, depth, spec.sampler == "torus" ? sample_torus : sample_p2));
    } catch (const TowerError& e) {
      fail("map", e.what());
    }
  } else if (cons == "resolved") {
    if (spec.sampler == "torus") fail("sampler", "resolved towers sample P^2");
    Atlas atlas = atlas_from_json(need(j, "blowups", ""));
    try {
      spec.tower = std::make_shared<const Tower>(resolved_tower(name, f, atlas));
    } catch (const TowerError& e) {
      fail("blowups", e.what());
    }
  } else {
    fail("construction", "unknown construction \"" + cons.get<std::string>() + "\"");
  }
  return spec;
}

json tower_descriptor(const Tower& t) {
  json levels = json::array();
  for (int n = 0; n <= t.depth(); ++n) {
    const TowerLevel& lv = t.level(n);
    levels.push_back({{"index", n},
                      {"space", lv.kind},
                      {"metric", lv.metric},
                      {"diam", lv.diam},
                      {"self_map_known", n == 0 || static_cast<bool>(lv.self_map)}});
  }
  return {{"name", t.name()}, {"levels", t.depth() + 1}, {"base_map", map_to_json(t.base_map())},
          {"level_data", levels}};
}

json to_json(const Lemma4Report& r) {
  json entries = json::array();
  for (const Lemma4Entry& e : r.entries) {
    entries.push_back({{"p", e.p}, {"l", e.l}, {"max_discrepancy", e.max_discrepancy},
                       {"samples", e.samples}, {"resampled", e.resampled}});
  }
  return {{"max_discrepancy", r.max_discrepancy}, {"resampled", r.resampled}, {"entries", entries}};
}

namespace {

json level_point_json(const LevelPoint& p) {
  if (const auto* x = std::get_if<ProjPoint>(&p)) return point_to_json(*x);
  const SurfPoint& s = std::get<SurfPoint>(p);
  return {{"chart", s.chart}, {"coords", {complex_json(s.coords[0]), complex_json(s.coords[1])}}};
}

json truncated_json(const TruncatedPoint& x) {
  json out = json::array();
  for (const LevelPoint& e : x.entries) out.push_back(level_point_json(e));
  return out;
}

}  // namespace

json to_json(const Tower& t, const ContinuityReport& r) {
  json out{{"tower", t.name()}, {"epsilon", r.epsilon}, {"eta", r.eta}, {"pairs", r.pairs},
           {"skipped", r.skipped}};
  if (r.counterexample) {
    out["counterexample"] = {{"x", truncated_json(r.counterexample->x)},
                             {"y", truncated_json(r.counterexample->y)},
                             {"delta_before", r.counterexample->delta_before},
                             {"delta_after", r.counterexample->delta_after}};
  } else {
    out["counterexample"] = nullptr;
  }
  return out;
}

json to_json(const EntropyReport& r) {
  json fits = json::array();
  for (const SlopeFit& f : r.fits) {
    fits.push_back({{"epsilon", f.epsilon},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"stderr", f.stderr_slope},
                    {"band", {f.slope - 2.0 * f.stderr_slope, f.slope + 2.0 * f.stderr_slope}},
                    {"saturated", f.saturated}});
  }
  json rows = json::array();
  for (const EntropyRow& row : r.rows) {
    rows.push_back({{"m", row.m}, {"epsilon", row.epsilon}, {"N", row.count}});
  }
  json out{{"system", r.system},   {"samples", r.samples}, {"admissible", r.admissible},
           {"discards", r.discards}, {"m_range", {r.m_lo, r.m_hi}}, {"fits", fits},
           {"rows", rows},         {"saturated", r.saturated}};
  out["warning"] = r.saturated ? json("separated sets reached half the sample; slopes are biased low")
                               : json(nullptr);
  return out;
}

}  // namespace merotower
