#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "merotower/json_io.hpp"
#include "merotower/scenarios.hpp"
#include "merotower/systems.hpp"

using namespace merotower;
using namespace testing;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data(const char* name) { return std::string(MEROTOWER_TEST_DATA) + "/" + name; }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DocumentError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("map documents") {
  CHECK(map_from_json(read_json_file(data("guedj.json"))) == guedj());
  CHECK(map_from_json(read_json_file(data("squaring.json"))) == squaring());
  const RationalMap f = guedj();
  CHECK(map_from_json(map_to_json(f)) == f);
  const json j = map_to_json(f);
  CHECK(j["degree"] == 2);
  CHECK(j["components"][1] == canon(P("w*t + t^2")));
}

TEST_CASE("document errors name the place") {
  const std::string bad = error_of([] { read_json_file(data("malformed.json")); });
  CHECK(bad.find("line") != std::string::npos);
  CHECK(bad.find("column") != std::string::npos);
  CHECK(error_of([] { map_from_json(read_json_file(data("bad_component.json"))); }).find("components[1]") !=
        std::string::npos);
  CHECK(error_of([] { map_from_json(read_json_file(data("missing_degree.json"))); }).find("degree") !=
        std::string::npos);
  CHECK(error_of([] { map_from_json(json{{"degree", 2}, {"components", json::array()}}); }).find("dim") !=
        std::string::npos);
  CHECK(error_of([] { map_from_json(json{{"dim", 2}, {"degree", 3}, {"components", {"z^2", "w^2", "t^2"}}}); })
            .find("components[0]") != std::string::npos);
  CHECK(error_of([] { parse_json_text("{\n  \"a\": [1,\n}", "x"); }).rfind("x: line 3", 0) == 0);
  CHECK_THROWS_AS(read_json_file(data("does_not_exist.json")), DocumentError);
}

TEST_CASE("indeterminacy output") {
  const json s = point_set_to_json(indeterminacy_locus(guedj()));
  REQUIRE(s["points"].size() == 1);
  CHECK(s["points"][0]["exact"] == json::array({"0", "1", "0"}));
  CHECK(s["positive_dimensional"] == false);
}

TEST_CASE("atlas documents") {
  const json blowups = read_json_file(data("guedj_tower.json"))["blowups"];
  const Atlas a = atlas_from_json(blowups);
  CHECK(a.leaf_ids() == guedj_double_atlas().leaf_ids());
  const json out = atlas_to_json(a);
  bool found = false;
  for (const json& c : out["charts"]) {
    if (c["id"] == "u=1") {
      found = true;
      CHECK(c["parent"] == "alpha=1");
      CHECK(c["leaf"] == true);
    }
  }
  CHECK(found);
  CHECK(out["blowups"].size() == 2);
  CHECK_THROWS_AS(atlas_from_json(json::array({json{{"chart", "nope"}, {"center", {0, 0}},
                                                    {"first", {"a=1", "b"}}, {"second", {"b=1", "a"}}}})),
                  std::exception);
}

TEST_CASE("tower documents") {
  const TowerSpec id = tower_from_json(read_json_file(data("identity_tower.json")));
  CHECK(id.tower->depth() == 8);
  CHECK(id.sampler == "torus");
  const json d = tower_descriptor(*id.tower);
  CHECK(d["levels"] == 9);
  CHECK(d["level_data"][3]["diam"] == 4.0);

  const TowerSpec g = tower_from_json(read_json_file(data("guedj_tower.json")));
  CHECK(g.tower->depth() == 1);
  CHECK(tower_descriptor(*g.tower)["level_data"].size() == 2);
  CHECK_THROWS_AS(tower_from_json(json{{"map", map_to_json(guedj())}, {"construction", "other"}}), DocumentError);
}

TEST_CASE("entropy summary") {
  const auto pts = circle_grid(2000, 1);
  const EntropyReport r = entropy_report(circle_doubling(), std::span<const Complex>(pts), 1, 4, {0.2});
  const json j = to_json(r);
  REQUIRE(j["fits"].size() == 1);
  const double slope = j["fits"][0]["slope"];
  const double lo = j["fits"][0]["band"][0], hi = j["fits"][0]["band"][1];
  CHECK(lo <= slope);
  CHECK(slope <= hi);
  CHECK(j["rows"].size() == 4);
  CHECK(j["warning"].is_null() == !r.saturated);
}

TEST_CASE("symbolic statements match the golden file") {
  const auto checks = guedj_formulas();
  for (const FormulaCheck& c : checks) {
    INFO(c.label);
    CHECK(c.computed == c.expected);
  }
  CHECK(formulas_text(checks) == slurp(std::string(MEROTOWER_GOLDEN) + "/guedj_formulas.txt"));
}

TEST_CASE("degree table") {
  const std::string csv = degrees_csv(guedj(), 3);
  CHECK(csv.rfind("n,degree,ratio,root\n1,2,", 0) == 0);
  CHECK(csv.find("\n3,8,") != std::string::npos);
}

TEST_CASE("seeded runs are reproducible") {
  const EntropyReport a = guedj_circle_entropy(3000, 1, 4, {0.2}, 7);
  const EntropyReport b = guedj_circle_entropy(3000, 1, 4, {0.2}, 7);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_json(a).dump() == to_json(b).dump());
  ToyConfig cfg;
  cfg.depth = 4;
  cfg.samples = 1500;
  const ToyEntropy t1 = toy_entropy(cfg), t2 = toy_entropy(cfg);
  CHECK(to_csv(t1.sigma) == to_csv(t2.sigma));
  CHECK(t1.difference() == t2.difference());
}
