#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "svlab/hypotheses.hpp"
#include "svlab/measures.hpp"
#include "svlab/montecarlo.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Experiment configs
//
// A config is one JSON object selecting an experiment and its inputs. The
// schema is validated before anything runs: required keys per experiment,
// unknown keys rejected by full path, rationals given as "p/q" or decimal
// strings (plain numbers are snapped to nearby small rationals).
//
//   experiment        verify | limit | solve | prop | weak-convergence
//   world             world literal (statistical experiments)
//   hypothesis        hypothesis literal (verify: open; limit: union)
//   partition         partition literal (solve)
//   alpha             level in (0,1)
//   n_max, trials     horizon and trial count
//   seed              64-bit master seed
//   threads           worker count (optional, default 1)
//   target_payload    designated accept payload (optional; solve defaults
//                     to the world's true answer)
//   claims            list of claim literals (optional)
//   output            {path, format: csv|json} (optional)
//   method, pattern, stages        prop experiment inputs
//   sequence, limit, events, tolerance   weak-convergence inputs
//
// World literals: "coin:1/2", {kind: coin, p}, {kind: finite, symbols,
// probs, label?}, {kind: real-line, density, atoms?, label?}.
// Hypothesis literals: a builtin name ("coin-over-half", "coin-at-most-half")
// or {kind: sub-basic | band | and | or | closed-complement | f-sigma, ...}.
// Event literals: {symbols: [...]} or {intervals: [{lo?, hi?, lo_closed?,
// hi_closed?}]}; the string "full-algebra" (weak-convergence only) expands
// to every event of a small finite alphabet.
// Partition literals: "bias-3cell" or {answers: [{label, hypothesis}]}.
// Claim literals: {kind: sv3-bound | sv4-eventual | convergence |
// limsup-bound, alpha?, target?, horizon?, depth?}.
// ---------------------------------------------------------------------------

struct OutputSpec {
  std::string path;
  std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
  std::string experiment;

  // verify / limit / solve
  Rational alpha = 0;
  std::int64_t n_max = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<World> world;
  std::optional<Hypothesis> hypothesis;
  std::optional<Partition> partition;
  std::optional<std::int32_t> target_payload;
  std::vector<Claim> claims;
  std::optional<OutputSpec> output;

  // prop
  std::string method;
  std::string pattern;
  int stages = 20;

  // weak-convergence
  std::vector<World> sequence;
  std::optional<World> limit_world;
  std::vector<Event> events;
  Rational tolerance = 0;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Literal parsers, exposed for reuse and tests. `where` prefixes error
// messages with the config path of the offending key.
World parse_world_literal(const nlohmann::json& j, const std::string& where);
Event parse_event_literal(const nlohmann::json& j, const SampleSpace& space,
                          const std::string& where);
Hypothesis parse_hypothesis_literal(const nlohmann::json& j, const SampleSpace& space,
                                    const std::string& where);
Partition parse_partition_literal(const nlohmann::json& j, const SampleSpace& space,
                                  const std::string& where);
Claim parse_claim_literal(const nlohmann::json& j, const std::string& where);
Rational parse_rational_field(const nlohmann::json& j, const std::string& where);

// Builtins addressable by name.
Hypothesis builtin_hypothesis(const std::string& name);
Partition builtin_partition(const std::string& name);

}  // namespace svlab
