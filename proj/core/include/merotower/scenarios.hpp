#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "merotower/blowup.hpp"
#include "merotower/entropy.hpp"
#include "merotower/rational_map.hpp"
#include "merotower/tower.hpp"

namespace merotower {

/// A demo stage failed; `stage()` names it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// [z^2 : wt + t^2 : t^2].
RationalMap guedj_map();
/// P^2 blown up at [0:1:0]; charts alpha=1 (z, beta) and beta=1 (t, alpha).
Atlas guedj_atlas();
/// The previous atlas blown up again at the origin of alpha=1; new charts
/// u=1 (z, v) and v=1 (beta, u).
Atlas guedj_double_atlas();
/// Depth-1 tower over the double blow-up: pi_1 = e1 o e2, s_1 = f o e1 o e2.
Tower build_guedj_tower();

/// One symbolic result next to the formula it should equal. Both sides are
/// canonical strings; `expected` is built from hand-written notation.
struct FormulaCheck {
  std::string label;
  std::string computed;
  std::string expected;
  bool matches() const { return computed == expected; }
};

/// Every symbolic statement about the example, computed and expected.
std::vector<FormulaCheck> guedj_formulas();
/// `label = computed` lines, the content of formulas.txt.
std::string formulas_text(const std::vector<FormulaCheck>& checks);

/// Degree table `n,degree,ratio,root` for n = 1..n_max.
std::string degrees_csv(const RationalMap& f, int n_max);

struct GuedjConfig {
  std::uint64_t seed = 1;
  int degree_n = 6;
  int topo_trials = 5;
  std::size_t circle_samples = 1 << 15;
  int m_lo = 2;
  int m_hi = 7;
  std::vector<double> epsilons{0.05, 0.1, 0.2};
  /// Slope band for the circle verdict and how many epsilons must land in it.
  double band_lo = 0.62;
  double band_hi = 0.76;
  int band_hits = 2;
  int disjoint_n = 2;
  int lemma4_samples = 200;
};

struct ToyConfig {
  std::uint64_t seed = 1;
  int depth = 8;
  std::size_t samples = 16384;
  int m_lo = 1;
  int m_hi = 4;
  double epsilon = 0.4;
  double tolerance = 0.1;
  int lemma4_samples = 100;
  int closed_form_pairs = 1000;
};

/// Files of a demo directory.
struct DemoBundle {
  nlohmann::json summary;
  nlohmann::json verdicts;
  std::string entropy_csv;
  std::string degrees_csv;
  std::string formulas;
};

/// Exceptional-circle entropy of the lifted map alpha -> alpha^2.
EntropyReport guedj_circle_entropy(std::size_t samples, int m_lo, int m_hi, const std::vector<double>& epsilons,
                                   std::uint64_t seed);

DemoBundle run_guedj_demo(const GuedjConfig& config);

/// Base and sigma reports of the toy comparison. sigma is measured at
/// epsilon * (2 - 2^-depth): on compatible points of the identity tower
/// delta equals that multiple of the Fubini-Study distance.
struct ToyEntropy {
  EntropyReport base;
  EntropyReport sigma;
  double sigma_epsilon = 0.0;
  double difference() const;
};
ToyEntropy toy_entropy(const ToyConfig& config);

DemoBundle run_toy_tower_demo(const ToyConfig& config);

/// Writes the five files; creates the directory.
void write_bundle(const DemoBundle& bundle, const std::string& dir);

}  // namespace merotower
