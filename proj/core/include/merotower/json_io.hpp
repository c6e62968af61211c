#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "merotower/blowup.hpp"
#include "merotower/entropy.hpp"
#include "merotower/rational_map.hpp"
#include "merotower/tower.hpp"

namespace merotower {

/// Bad input document. The message names the line or the offending field.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text into JSON; syntax errors report line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source = "input");
nlohmann::json read_json_file(const std::string& path);

/// {dim, degree, components: [...], variables?}. Components may use canonical
/// strings or ordinary notation; `degree` must match the components.
RationalMap map_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const RationalMap& f);

nlohmann::json point_to_json(const ProjPoint& p);
nlohmann::json point_set_to_json(const AlgebraicPointSet& s);

/// Charts with their blow-downs, inverse formulas and exceptional equations.
nlohmann::json atlas_to_json(const Atlas& atlas);
/// A list of blow-ups applied to P^2, each either
/// {point: [z, w, t], first: [id, var], second: [id, var]} or
/// {chart, center: [c1, c2], first, second}. Numbers may be strings like "1/2".
Atlas atlas_from_json(const nlohmann::json& blowups);

/// Tower built from a descriptor:
/// {name?, map, construction: "identity", depth, sampler?: "p2"|"torus"} or
/// {name?, map, construction: "resolved", blowups: [...]}.
struct TowerSpec {
  std::shared_ptr<const Tower> tower;
  std::string sampler = "p2";
};
TowerSpec tower_from_json(const nlohmann::json& j);
/// Level count, space and metric tags, diameters.
nlohmann::json tower_descriptor(const Tower& t);

nlohmann::json to_json(const Lemma4Report& r);
nlohmann::json to_json(const Tower& t, const ContinuityReport& r);

/// Summary with one fit per epsilon and a slope band of two standard errors.
nlohmann::json to_json(const EntropyReport& r);

}  // namespace merotower
