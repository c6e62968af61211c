// merotower: batch front end. Exit codes: 0 ok, 2 usage or bad input, 3 computation failure.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "merotower/json_io.hpp"
#include "merotower/scenarios.hpp"
#include "merotower/systems.hpp"

using namespace merotower;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> parse_seed(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// --seed, then MEROTOWER_SEED.
std::optional<std::uint64_t> resolve_seed(const std::string& flag) {
  if (!flag.empty()) {
    auto s = parse_seed(flag);
    if (!s) throw UsageError("--seed: not a non-negative integer: " + flag);
    return s;
  }
  if (const char* env = std::getenv("MEROTOWER_SEED")) {
    auto s = parse_seed(env);
    if (!s) throw UsageError("MEROTOWER_SEED: not a non-negative integer: " + std::string(env));
    return s;
  }
  return std::nullopt;
}

std::uint64_t require_seed(const std::string& flag, const json& config) {
  if (auto s = resolve_seed(flag)) return *s;
  if (config.contains("seed")) {
    if (!config["seed"].is_number_unsigned()) throw DocumentError("config.seed: expected a non-negative integer");
    return config["seed"].get<std::uint64_t>();
  }
  throw UsageError("a seed is required: pass --seed, set MEROTOWER_SEED or put \"seed\" in the config");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--m-range: expected a:b, got " + s);
  try {
    std::size_t used = 0;
    const int a = std::stoi(s.substr(0, colon), &used);
    if (used != colon) throw UsageError("");
    const std::string rest = s.substr(colon + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw UsageError("");
    return {a, b};
  } catch (const std::exception&) {
    throw UsageError("--m-range: expected a:b, got " + s);
  }
}

std::vector<double> parse_eps(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("--eps: not a number: \"" + item + "\"");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
void take(const json& config, const char* key, T& value) {
  if (!config.contains(key)) return;
  try {
    value = config[key].get<T>();
  } catch (const json::exception&) {
    throw DocumentError(std::string("config.") + key + ": wrong type");
  }
}

const RationalMap& squaring_map() {
  static const RationalMap sq = [] {
    const std::vector<std::string> n{"z", "w", "t"};
    return RationalMap({HomoPoly(parse_poly("z^2", n)), HomoPoly(parse_poly("w^2", n)), HomoPoly(parse_poly("t^2", n))});
  }();
  return sq;
}

struct EntropyArgs {
  std::string system;
  std::string m_range;
  std::string eps;
  long samples = -1;
  std::string sampler;
  std::string csv;
};

int cmd_degrees(const std::string& path, int n, const std::string& seed_flag, const std::string& out_path) {
  if (n < 1) throw UsageError("--n must be >= 1");
  const RationalMap f = map_from_json(read_json_file(path));
  // Only the topological degree samples; without a seed it uses a fixed one.
  const std::uint64_t seed = resolve_seed(seed_flag).value_or(1);
  std::string csv = degrees_csv(f, n);
  csv += "# d1_estimate=" + json(d1_estimate(f, n)).dump() + "\n";
  if (f.dim() == 2) {
    const TopologicalDegreeReport td = topological_degree(f, 5, seed);
    csv += "# topological_degree=" + std::to_string(td.degree) + " agreeing=" + std::to_string(td.agreeing) + "/" +
           std::to_string(td.trials) + "\n";
  } else {
    csv += "# topological_degree=unsupported (dim " + std::to_string(f.dim()) + ")\n";
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
  }
  return 0;
}

int cmd_indeterminacy(const std::string& path) {
  const RationalMap f = map_from_json(read_json_file(path));
  std::cout << point_set_to_json(indeterminacy_locus(f)).dump(2) << "\n";
  return 0;
}

int cmd_entropy(EntropyArgs a, const std::string& seed_flag, const json& config) {
  const bool circle = a.system == "guedj-circle";
  if (a.m_range.empty()) {
    if (config.contains("m_range")) {
      auto r = config["m_range"];
      if (!r.is_array() || r.size() != 2) throw DocumentError("config.m_range: expected [a, b]");
      a.m_range = std::to_string(r[0].get<int>()) + ":" + std::to_string(r[1].get<int>());
    } else {
      a.m_range = circle ? "2:7" : "1:4";
    }
  }
  std::vector<double> eps;
  if (!a.eps.empty()) {
    eps = parse_eps(a.eps);
  } else if (config.contains("eps")) {
    take(config, "eps", eps);
  } else {
    eps = circle ? std::vector<double>{0.05, 0.1, 0.2} : std::vector<double>{0.4};
  }
  if (a.samples < 0) {
    a.samples = circle ? (1 << 15) : 8192;
    take(config, "samples", a.samples);
  }
  if (a.samples <= 0) throw UsageError("--samples must be positive");
  for (double e : eps) {
    if (!(e > 0.0)) throw UsageError("--eps values must be positive");
  }
  const auto [m_lo, m_hi] = parse_range(a.m_range);
  if (m_lo < 1 || m_hi - m_lo + 1 < 4) throw UsageError("--m-range must cover at least 4 values with a >= 1");
  const std::uint64_t seed = require_seed(seed_flag, config);
  const auto n = static_cast<std::size_t>(a.samples);
  if (a.sampler.empty()) a.sampler = config.value("sampler", std::string());

  EntropyReport rep;
  json extra = json::object();
  if (circle) {
    rep = guedj_circle_entropy(n, m_lo, m_hi, eps, seed);
  } else if (a.system == "torus-squaring" || a.system == "identity") {
    const bool torus = a.system == "torus-squaring";
    const RationalMap f = torus ? squaring_map() : RationalMap::identity(2);
    const auto pts = torus ? torus_samples(n, seed) : p2_samples(n, seed);
    rep = entropy_report(map_system(f), std::span<const ProjPoint>(pts), m_lo, m_hi, eps);
    rep.system = a.system;
  } else if (a.system.rfind("tower:", 0) == 0) {
    const TowerSpec spec = tower_from_json(read_json_file(a.system.substr(6)));
    const Tower& t = *spec.tower;
    const auto pts = spec.sampler == "torus" ? torus_samples(n, seed) : p2_samples(n, seed);
    std::vector<TruncatedPoint> lifted;
    std::size_t unliftable = 0;
    for (const ProjPoint& x : pts) {
      try {
        lifted.push_back(lift_base_point(t, x, t.depth()));
      } catch (const TowerError&) {
        ++unliftable;
      }
    }
    try {
      rep = entropy_report(sigma_system(spec.tower), std::span<const TruncatedPoint>(lifted), m_lo, m_hi, eps);
    } catch (const EntropyError& e) {
      throw EntropyError(std::string(e.what()) + "; sigma orbits on a depth-" + std::to_string(t.depth()) +
                         " truncation have at most " + std::to_string(t.depth() + 1) + " points");
    }
    extra = {{"tower", tower_descriptor(t)}, {"unliftable", unliftable}};
  } else {
    const RationalMap f = map_from_json(read_json_file(a.system));
    const auto pts = a.sampler == "torus" ? torus_samples(n, seed) : p2_samples(n, seed);
    rep = entropy_report(map_system(f), std::span<const ProjPoint>(pts), m_lo, m_hi, eps);
    rep.system = a.system;
  }
  json j = to_json(rep);
  j["seed"] = seed;
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (!a.csv.empty()) write_text(a.csv, to_csv(rep));
  std::cout << j.dump(2) << "\n";
  if (rep.saturated) std::cerr << "warning: " << j["warning"].get<std::string>() << "\n";
  return 0;
}

int cmd_demo(const std::string& which, const std::string& out, const std::string& seed_flag, const json& config) {
  const std::uint64_t seed = require_seed(seed_flag, config);
  DemoBundle b;
  if (which == "guedj") {
    GuedjConfig c;
    take(config, "degree_n", c.degree_n);
    take(config, "topo_trials", c.topo_trials);
    take(config, "circle_samples", c.circle_samples);
    take(config, "m_lo", c.m_lo);
    take(config, "m_hi", c.m_hi);
    take(config, "epsilons", c.epsilons);
    take(config, "disjoint_n", c.disjoint_n);
    take(config, "lemma4_samples", c.lemma4_samples);
    c.seed = seed;
    b = run_guedj_demo(c);
  } else if (which == "toy") {
    ToyConfig c;
    take(config, "depth", c.depth);
    take(config, "samples", c.samples);
    take(config, "m_lo", c.m_lo);
    take(config, "m_hi", c.m_hi);
    take(config, "epsilon", c.epsilon);
    take(config, "tolerance", c.tolerance);
    take(config, "lemma4_samples", c.lemma4_samples);
    c.seed = seed;
    b = run_toy_tower_demo(c);
  } else {
    throw UsageError("demo: expected guedj or toy, got " + which);
  }
  write_bundle(b, out);
  std::cout << b.verdicts.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of rational maps of P^2: degrees, indeterminacy, blow-up towers, entropy."};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::string config_path;
  std::string seed_flag;
  app.add_option("--threads", threads, "Cap on worker threads (0 = all cores)");
  app.add_option("--config", config_path, "JSON file whose keys stand in for flags");

  auto* deg = app.add_subcommand("degrees", "Degree sequence, ratios, d1 estimate, topological degree (CSV)");
  std::string map_path;
  int n = 6;
  std::string out_path;
  deg->add_option("map", map_path, "Map JSON file")->required();
  deg->add_option("--n", n, "Number of iterates");
  deg->add_option("--out", out_path, "Write the CSV here instead of stdout");
  deg->add_option("--seed", seed_flag, "Seed for the topological degree trials");

  auto* ind = app.add_subcommand("indeterminacy", "Indeterminacy locus as JSON");
  ind->add_option("map", map_path, "Map JSON file")->required();

  auto* ent = app.add_subcommand("entropy", "Separated-set entropy estimate (JSON; --csv for the table)");
  EntropyArgs ea;
  ent->add_option("system", ea.system, "Map file, guedj-circle, torus-squaring, identity or tower:<file>")->required();
  ent->add_option("--m-range", ea.m_range, "Orbit lengths a:b");
  ent->add_option("--eps", ea.eps, "Comma-separated radii");
  ent->add_option("--samples", ea.samples, "Number of sample points");
  ent->add_option("--sampler", ea.sampler, "p2 or torus (map files)");
  ent->add_option("--csv", ea.csv, "Also write m,epsilon,N,discards here");
  ent->add_option("--seed", seed_flag, "Sampling seed (or MEROTOWER_SEED)");

  auto* demo = app.add_subcommand("demo", "Write a report directory for the guedj or toy scenario");
  std::string which;
  std::string out_dir;
  demo->add_option("scenario", which, "guedj or toy")->required()->check(CLI::IsMember({"guedj", "toy"}));
  demo->add_option("--out", out_dir, "Output directory")->required();
  demo->add_option("--seed", seed_flag, "Seed (or MEROTOWER_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_worker_threads(threads);
    json config = json::object();
    if (!config_path.empty()) {
      config = read_json_file(config_path);
      if (!config.is_object()) throw DocumentError(config_path + ": expected a JSON object");
    }
    if (*deg) return cmd_degrees(map_path, n, seed_flag, out_path);
    if (*ind) return cmd_indeterminacy(map_path);
    if (*ent) return cmd_entropy(ea, seed_flag, config);
    if (*demo) return cmd_demo(which, out_dir, seed_flag, config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
