#include "svlab/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "svlab/error.hpp"

namespace svlab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail("config key \"" + where + "\": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
}

// Rejects keys outside `allowed`, naming the offending key by path.
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      fail("config key \"" + (where.empty() ? key : where + "." + key) +
           "\" is not recognized");
  }
}

const json& req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where.empty() ? key : where + "." + key, "is required");
  return j.at(key);
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

std::string req_str(const json& j, const char* key, const std::string& where) {
  const json& v = req(j, key, where);
  if (!v.is_string()) bad(path_of(where, key), "must be a string");
  return v.get<std::string>();
}

std::int64_t req_int(const json& j, const char* key, const std::string& where) {
  const json& v = req(j, key, where);
  if (!v.is_number_integer()) bad(path_of(where, key), "must be an integer");
  return v.get<std::int64_t>();
}

bool opt_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<bool>();
}

}  // namespace

Rational parse_rational_field(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) return rational_snap(j.get<double>());
  } catch (const Error& e) {
    bad(where, e.what());
  }
  bad(where, "must be a rational: a \"p/q\" or decimal string, or a number");
}

World parse_world_literal(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.rfind("coin:", 0) == 0) {
      try {
        return World::coin(rational_from_string(s.substr(5)));
      } catch (const Error& e) {
        bad(where, e.what());
      }
    }
    bad(where, "unknown world name \"" + s + "\" (expected \"coin:p\" or an object)");
  }
  require_object(j, where);
  std::string kind = req_str(j, "kind", where);
  if (kind == "coin") {
    check_keys(j, {"kind", "p"}, where);
    return World::coin(parse_rational_field(req(j, "p", where), path_of(where, "p")));
  }
  if (kind == "finite") {
    check_keys(j, {"kind", "symbols", "probs", "label"}, where);
    const json& syms = req(j, "symbols", where);
    if (!syms.is_array() || syms.empty()) bad(path_of(where, "symbols"), "must be a non-empty array");
    std::vector<std::string> names;
    for (const auto& s : syms) {
      if (!s.is_string()) bad(path_of(where, "symbols"), "entries must be strings");
      names.push_back(s.get<std::string>());
    }
    const json& probs = req(j, "probs", where);
    if (!probs.is_array() || probs.size() != names.size())
      bad(path_of(where, "probs"), "must be an array matching \"symbols\" in length");
    std::vector<Rational> p;
    for (std::size_t i = 0; i < probs.size(); ++i)
      p.push_back(parse_rational_field(probs[i], path_of(where, "probs") + "[" +
                                                     std::to_string(i) + "]"));
    std::string label = j.contains("label") ? j.at("label").get<std::string>() : "";
    return World::finite(SampleSpace::finite_alphabet(std::move(names)), std::move(p), label);
  }
  if (kind == "real-line") {
    check_keys(j, {"kind", "density", "atoms", "label"}, where);
    std::vector<DensityPiece> density;
    const json& dj = req(j, "density", where);
    if (!dj.is_array()) bad(path_of(where, "density"), "must be an array");
    for (std::size_t i = 0; i < dj.size(); ++i) {
      std::string pw = path_of(where, "density") + "[" + std::to_string(i) + "]";
      require_object(dj[i], pw);
      check_keys(dj[i], {"lo", "hi", "coeffs"}, pw);
      DensityPiece piece;
      piece.lo = parse_rational_field(req(dj[i], "lo", pw), pw + ".lo");
      piece.hi = parse_rational_field(req(dj[i], "hi", pw), pw + ".hi");
      const json& cj = req(dj[i], "coeffs", pw);
      if (!cj.is_array() || cj.empty()) bad(pw + ".coeffs", "must be a non-empty array");
      for (std::size_t c = 0; c < cj.size(); ++c)
        piece.coeffs.push_back(
            parse_rational_field(cj[c], pw + ".coeffs[" + std::to_string(c) + "]"));
      density.push_back(std::move(piece));
    }
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      const json& aj = j.at("atoms");
      if (!aj.is_array()) bad(path_of(where, "atoms"), "must be an array");
      for (std::size_t i = 0; i < aj.size(); ++i) {
        std::string pw = path_of(where, "atoms") + "[" + std::to_string(i) + "]";
        require_object(aj[i], pw);
        check_keys(aj[i], {"at", "mass"}, pw);
        atoms.push_back({parse_rational_field(req(aj[i], "at", pw), pw + ".at"),
                         parse_rational_field(req(aj[i], "mass", pw), pw + ".mass")});
      }
    }
    std::string label = j.contains("label") ? j.at("label").get<std::string>() : "";
    return World::real_line(std::move(density), std::move(atoms), label);
  }
  bad(path_of(where, "kind"), "must be one of coin, finite, real-line (got \"" + kind + "\")");
}

Event parse_event_literal(const json& j, const SampleSpace& space, const std::string& where) {
  require_object(j, where);
  if (j.contains("symbols")) {
    check_keys(j, {"symbols"}, where);
    const json& syms = j.at("symbols");
    if (!syms.is_array()) bad(path_of(where, "symbols"), "must be an array");
    std::vector<std::string> names;
    for (const auto& s : syms) names.push_back(s.get<std::string>());
    return Event::of_symbols(space, names);
  }
  if (j.contains("intervals")) {
    check_keys(j, {"intervals"}, where);
    const json& iv = j.at("intervals");
    if (!iv.is_array()) bad(path_of(where, "intervals"), "must be an array");
    std::vector<Interval> pieces;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      std::string pw = path_of(where, "intervals") + "[" + std::to_string(i) + "]";
      require_object(iv[i], pw);
      check_keys(iv[i], {"lo", "hi", "lo_closed", "hi_closed"}, pw);
      Interval piece;
      if (iv[i].contains("lo") && !iv[i].at("lo").is_null())
        piece.lo = parse_rational_field(iv[i].at("lo"), pw + ".lo");
      if (iv[i].contains("hi") && !iv[i].at("hi").is_null())
        piece.hi = parse_rational_field(iv[i].at("hi"), pw + ".hi");
      piece.lo_closed = opt_bool(iv[i], "lo_closed", false);
      piece.hi_closed = opt_bool(iv[i], "hi_closed", false);
      pieces.push_back(std::move(piece));
    }
    return Event::of_intervals(space, std::move(pieces));
  }
  bad(where, "event literal needs \"symbols\" or \"intervals\"");
}

Hypothesis parse_hypothesis_literal(const json& j, const SampleSpace& space,
                                    const std::string& where) {
  if (j.is_string()) {
    Hypothesis h = builtin_hypothesis(j.get<std::string>());
    if (h.space() != space)
      bad(where, "builtin hypothesis \"" + j.get<std::string>() +
                     "\" uses a different sample space than the configured world");
    return h;
  }
  require_object(j, where);
  std::string kind = req_str(j, "kind", where);
  if (kind == "sub-basic") {
    check_keys(j, {"kind", "event", "bound"}, where);
    Event a = parse_event_literal(req(j, "event", where), space, path_of(where, "event"));
    return Hypothesis::sub_basic(
        a, parse_rational_field(req(j, "bound", where), path_of(where, "bound")));
  }
  if (kind == "band") {
    check_keys(j, {"kind", "event", "low", "high"}, where);
    Event a = parse_event_literal(req(j, "event", where), space, path_of(where, "event"));
    return Hypothesis::band(a,
                            parse_rational_field(req(j, "low", where), path_of(where, "low")),
                            parse_rational_field(req(j, "high", where), path_of(where, "high")));
  }
  if (kind == "and") {
    check_keys(j, {"kind", "parts"}, where);
    const json& parts = req(j, "parts", where);
    if (!parts.is_array() || parts.size() != 2)
      bad(path_of(where, "parts"), "must be an array of exactly two hypotheses");
    return Hypothesis::conj(
        parse_hypothesis_literal(parts[0], space, path_of(where, "parts") + "[0]"),
        parse_hypothesis_literal(parts[1], space, path_of(where, "parts") + "[1]"));
  }
  if (kind == "or") {
    check_keys(j, {"kind", "parts"}, where);
    const json& parts = req(j, "parts", where);
    if (!parts.is_array() || parts.empty())
      bad(path_of(where, "parts"), "must be a non-empty array of hypotheses");
    std::vector<Hypothesis> hs;
    for (std::size_t i = 0; i < parts.size(); ++i)
      hs.push_back(parse_hypothesis_literal(parts[i], space,
                                            path_of(where, "parts") + "[" + std::to_string(i) + "]"));
    return Hypothesis::disj(std::move(hs));
  }
  if (kind == "closed-complement") {
    check_keys(j, {"kind", "inner"}, where);
    return Hypothesis::closed_complement(
        parse_hypothesis_literal(req(j, "inner", where), space, path_of(where, "inner")));
  }
  if (kind == "f-sigma") {
    check_keys(j, {"kind", "pieces", "name"}, where);
    const json& pieces = req(j, "pieces", where);
    if (!pieces.is_array() || pieces.empty())
      bad(path_of(where, "pieces"), "must be a non-empty array of hypotheses");
    std::vector<Hypothesis> hs;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      hs.push_back(parse_hypothesis_literal(pieces[i], space,
                                            path_of(where, "pieces") + "[" + std::to_string(i) + "]"));
    std::string name = j.contains("name") ? j.at("name").get<std::string>() : "";
    return Hypothesis::f_sigma(std::move(hs), name);
  }
  bad(path_of(where, "kind"),
      "must be one of sub-basic, band, and, or, closed-complement, f-sigma (got \"" + kind +
          "\")");
}

Partition parse_partition_literal(const json& j, const SampleSpace& space,
                                  const std::string& where) {
  if (j.is_string()) {
    Partition p = builtin_partition(j.get<std::string>());
    for (const auto& a : p.answers())
      if (a.hypothesis.space() != space)
        bad(where, "builtin partition \"" + j.get<std::string>() +
                       "\" uses a different sample space than the configured world");
    return p;
  }
  require_object(j, where);
  check_keys(j, {"answers"}, where);
  const json& answers = req(j, "answers", where);
  if (!answers.is_array() || answers.empty())
    bad(path_of(where, "answers"), "must be a non-empty array");
  std::vector<Answer> out;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    std::string pw = path_of(where, "answers") + "[" + std::to_string(i) + "]";
    require_object(answers[i], pw);
    check_keys(answers[i], {"label", "hypothesis"}, pw);
    out.push_back({req_str(answers[i], "label", pw),
                   parse_hypothesis_literal(req(answers[i], "hypothesis", pw), space,
                                            pw + ".hypothesis")});
  }
  return Partition(std::move(out));
}

Claim parse_claim_literal(const json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, {"kind", "alpha", "target", "horizon", "depth"}, where);
  Claim c;
  c.kind = req_str(j, "kind", where);
  bool needs_alpha = c.kind == "sv3-bound" || c.kind == "limsup-bound";
  bool needs_target = c.kind == "sv4-eventual" || c.kind == "convergence";
  if (!needs_alpha && !needs_target)
    bad(path_of(where, "kind"),
        "must be one of sv3-bound, sv4-eventual, convergence, limsup-bound (got \"" + c.kind +
            "\")");
  if (needs_alpha)
    c.alpha = parse_rational_field(req(j, "alpha", where), path_of(where, "alpha"));
  if (needs_target) {
    const json& t = req(j, "target", where);
    if (!t.is_number()) bad(path_of(where, "target"), "must be a number");
    c.target = t.get<double>();
  }
  if (j.contains("horizon")) c.horizon = j.at("horizon").get<std::int64_t>();
  if (j.contains("depth")) c.depth = static_cast<int>(j.at("depth").get<std::int64_t>());
  return c;
}

Hypothesis builtin_hypothesis(const std::string& name) {
  const SampleSpace coin_space = World::coin(Rational(1, 2)).space();
  Event heads = Event::of_symbols(coin_space, {"H"});
  if (name == "coin-over-half") return Hypothesis::sub_basic(heads, Rational(1, 2));
  if (name == "coin-at-most-half")
    return Hypothesis::f_sigma(
        {Hypothesis::closed_complement(Hypothesis::sub_basic(heads, Rational(1, 2)))},
        "coin-at-most-half");
  fail("unknown builtin hypothesis: \"" + name +
       "\" (available: coin-over-half, coin-at-most-half)");
}

Partition builtin_partition(const std::string& name) {
  if (name != "bias-3cell")
    fail("unknown builtin partition: \"" + name + "\" (available: bias-3cell)");
  const SampleSpace coin_space = World::coin(Rational(1, 2)).space();
  Event heads = Event::of_symbols(coin_space, {"H"});
  Event tails = Event::of_symbols(coin_space, {"T"});
  Rational third(1, 3);

  // low: P(H) <= 1/3, a single closed piece.
  Hypothesis low = Hypothesis::f_sigma(
      {Hypothesis::closed_complement(Hypothesis::sub_basic(heads, third))}, "low");
  // high: P(T) <= 1/3, i.e. P(H) >= 2/3.
  Hypothesis high = Hypothesis::f_sigma(
      {Hypothesis::closed_complement(Hypothesis::sub_basic(tails, third))}, "high");
  // middle: the open band 1/3 < P(H) < 2/3 exhausted by the closed bands
  // [1/3 + 1/m, 2/3 - 1/m], m = piece index + 6.
  Hypothesis middle = Hypothesis::f_sigma(
      [heads, tails](int i) -> std::optional<Hypothesis> {
        if (i < 1) return std::nullopt;
        Rational m(i + 6);
        Rational edge = Rational(2, 3) - 1 / m;  // both cut points equal 2/3 - 1/m
        return Hypothesis::closed_complement(Hypothesis::disj(
            {Hypothesis::sub_basic(tails, edge), Hypothesis::sub_basic(heads, edge)}));
      },
      "middle");
  return Partition({{"low", low}, {"middle", middle}, {"high", high}});
}

ExperimentConfig parse_config(const json& j) {
  require_object(j, "(top level)");
  ExperimentConfig cfg;
  cfg.experiment = req_str(j, "experiment", "");

  auto parse_common = [&](bool wants_hypothesis, bool wants_partition) {
    cfg.alpha = parse_rational_field(req(j, "alpha", ""), "alpha");
    if (cfg.alpha <= 0 || cfg.alpha >= 1) fail("alpha must lie in (0,1)");
    cfg.n_max = req_int(j, "n_max", "");
    if (cfg.n_max < 1) bad("n_max", "must be at least 1");
    cfg.trials = req_int(j, "trials", "");
    if (cfg.trials < 1) bad("trials", "must be at least 1");
    cfg.seed = static_cast<std::uint64_t>(req_int(j, "seed", ""));
    if (j.contains("threads")) {
      cfg.threads = static_cast<int>(j.at("threads").get<std::int64_t>());
      if (cfg.threads < 1) bad("threads", "must be at least 1");
    }
    cfg.world = parse_world_literal(req(j, "world", ""), "world");
    if (wants_hypothesis)
      cfg.hypothesis = parse_hypothesis_literal(req(j, "hypothesis", ""),
                                                cfg.world->space(), "hypothesis");
    if (wants_partition)
      cfg.partition =
          parse_partition_literal(req(j, "partition", ""), cfg.world->space(), "partition");
    if (j.contains("target_payload"))
      cfg.target_payload = static_cast<std::int32_t>(j.at("target_payload").get<std::int64_t>());
    if (j.contains("claims")) {
      const json& claims = j.at("claims");
      if (!claims.is_array()) bad("claims", "must be an array");
      for (std::size_t i = 0; i < claims.size(); ++i)
        cfg.claims.push_back(parse_claim_literal(claims[i], "claims[" + std::to_string(i) + "]"));
    }
  };

  auto parse_output = [&] {
    if (!j.contains("output")) return;
    const json& o = j.at("output");
    require_object(o, "output");
    check_keys(o, {"path", "format"}, "output");
    OutputSpec spec;
    spec.path = req_str(o, "path", "output");
    if (o.contains("format")) spec.format = o.at("format").get<std::string>();
    if (spec.format != "csv" && spec.format != "json")
      bad("output.format", "must be \"csv\" or \"json\"");
    cfg.output = spec;
  };

  if (cfg.experiment == "verify" || cfg.experiment == "limit") {
    check_keys(j,
               {"experiment", "alpha", "n_max", "trials", "seed", "threads", "world",
                "hypothesis", "target_payload", "claims", "output"},
               "");
    parse_common(/*wants_hypothesis=*/true, /*wants_partition=*/false);
  } else if (cfg.experiment == "solve") {
    check_keys(j,
               {"experiment", "alpha", "n_max", "trials", "seed", "threads", "world",
                "partition", "target_payload", "claims", "output"},
               "");
    parse_common(/*wants_hypothesis=*/false, /*wants_partition=*/true);
  } else if (cfg.experiment == "prop") {
    check_keys(j, {"experiment", "method", "pattern", "stages", "seed", "output"}, "");
    cfg.method = req_str(j, "method", "");
    cfg.pattern = req_str(j, "pattern", "");
    if (j.contains("stages")) {
      cfg.stages = static_cast<int>(j.at("stages").get<std::int64_t>());
      if (cfg.stages < 1) bad("stages", "must be at least 1");
    }
    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(j.at("seed").get<std::int64_t>());
  } else if (cfg.experiment == "weak-convergence") {
    check_keys(j, {"experiment", "sequence", "limit", "events", "tolerance", "seed", "output"},
               "");
    const json& seq = req(j, "sequence", "");
    if (!seq.is_array() || seq.empty()) bad("sequence", "must be a non-empty array of worlds");
    for (std::size_t i = 0; i < seq.size(); ++i)
      cfg.sequence.push_back(parse_world_literal(seq[i], "sequence[" + std::to_string(i) + "]"));
    cfg.limit_world = parse_world_literal(req(j, "limit", ""), "limit");
    const json& ev = req(j, "events", "");
    if (ev.is_string() && ev.get<std::string>() == "full-algebra") {
      const SampleSpace& space = cfg.limit_world->space();
      if (space.kind() != SpaceKind::FiniteAlphabet)
        bad("events", "\"full-algebra\" needs a finite-alphabet world");
      const auto& symbols = space.symbols();
      if (symbols.size() > 10) bad("events", "\"full-algebra\" is limited to 10 symbols");
      for (std::uint32_t mask = 0; mask < (1u << symbols.size()); ++mask) {
        std::vector<std::string> names;
        for (std::size_t b = 0; b < symbols.size(); ++b)
          if (mask & (1u << b)) names.push_back(symbols[b]);
        cfg.events.push_back(Event::of_symbols(space, names));
      }
    } else if (ev.is_array() && !ev.empty()) {
      for (std::size_t i = 0; i < ev.size(); ++i)
        cfg.events.push_back(parse_event_literal(ev[i], cfg.limit_world->space(),
                                                 "events[" + std::to_string(i) + "]"));
    } else {
      bad("events", "must be \"full-algebra\" or a non-empty array of events");
    }
    cfg.tolerance = parse_rational_field(req(j, "tolerance", ""), "tolerance");
    if (cfg.tolerance <= 0) bad("tolerance", "must be positive");
    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(j.at("seed").get<std::int64_t>());
  } else {
    bad("experiment",
        "must be one of verify, limit, solve, prop, weak-convergence (got \"" + cfg.experiment +
            "\")");
  }
  parse_output();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace svlab
